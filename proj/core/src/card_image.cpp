// Copyright 2026 The scauth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scauth/card_image.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

namespace scauth {

namespace {

// TLV tags. Tag 0x01 must come first so the decoder can dispatch.
enum : std::uint8_t {
    kTagProtocol = 0x01,
    kTagIdentity = 0x02,
    kTagServerIdentity = 0x03,
    kTagQueryCounter = 0x04,
    kTagCounterLimit = 0x05,
    kTagDestroyed = 0x06,
    kTagRngSeed = 0x07,
    kTagRngChainKey = 0x08,
    kTagRngCounter = 0x09,
    kTagGroupQ = 0x0a,
    kTagGroupT = 0x0b,
    kTagSuiteId = 0x0c,
    kTagHashId = 0x0d,
    kTagWrappedKey = 0x10,      // ssca
    kTagBlindedKey = 0x11,      // pscab D
    kTagServerGenerator = 0x12, // pscab g_S
    kTagBlindedGenerator = 0x13,// pscav W
};

void put_tlv(Bytes& out, std::uint8_t tag, ByteView value) {
    out.push_back(tag);
    put_be32(out, static_cast<std::uint32_t>(value.size()));
    out.insert(out.end(), value.begin(), value.end());
}

void put_tlv_u32(Bytes& out, std::uint8_t tag, std::uint32_t v) {
    Bytes b;
    put_be32(b, v);
    put_tlv(out, tag, b);
}

void put_tlv_u64(Bytes& out, std::uint8_t tag, std::uint64_t v) {
    Bytes b;
    put_be64(b, v);
    put_tlv(out, tag, b);
}

void put_tlv_byte(Bytes& out, std::uint8_t tag, std::uint8_t v) {
    put_tlv(out, tag, ByteView(&v, 1));
}

class TlvMap {
public:
    static std::optional<TlvMap> parse(ByteView in) {
        TlvMap m;
        std::size_t off = 0;
        while (off < in.size()) {
            if (in.size() - off < 5) return std::nullopt;
            std::uint8_t tag = in[off];
            std::uint32_t len = get_be32(in.data() + off + 1);
            off += 5;
            if (in.size() - off < len) return std::nullopt;
            if (m.fields_.count(tag)) return std::nullopt;  // duplicate tag
            m.fields_[tag] = Bytes(in.begin() + static_cast<long>(off),
                                   in.begin() + static_cast<long>(off + len));
            off += len;
        }
        return m;
    }

    const Bytes* find(std::uint8_t tag) const {
        auto it = fields_.find(tag);
        return it == fields_.end() ? nullptr : &it->second;
    }

    std::optional<std::string> get_string(std::uint8_t tag) const {
        const Bytes* b = find(tag);
        if (!b) return std::nullopt;
        return std::string(b->begin(), b->end());
    }

    std::optional<Bytes> get_bytes(std::uint8_t tag, std::size_t expect_len) const {
        const Bytes* b = find(tag);
        if (!b || b->size() != expect_len) return std::nullopt;
        return *b;
    }

    std::optional<std::uint32_t> get_u32(std::uint8_t tag) const {
        const Bytes* b = find(tag);
        if (!b || b->size() != 4) return std::nullopt;
        return get_be32(b->data());
    }

    std::optional<std::uint64_t> get_u64(std::uint8_t tag) const {
        const Bytes* b = find(tag);
        if (!b || b->size() != 8) return std::nullopt;
        return get_be64(b->data());
    }

    std::optional<std::uint8_t> get_byte(std::uint8_t tag) const {
        const Bytes* b = find(tag);
        if (!b || b->size() != 1) return std::nullopt;
        return (*b)[0];
    }

private:
    std::map<std::uint8_t, Bytes> fields_;
};

void put_common(Bytes& out, std::string_view identity, std::string_view server_identity,
                std::uint32_t query_counter, std::uint32_t counter_limit, bool destroyed,
                const RngState& rng) {
    put_tlv(out, kTagIdentity, to_bytes(identity));
    put_tlv(out, kTagServerIdentity, to_bytes(server_identity));
    put_tlv_u32(out, kTagQueryCounter, query_counter);
    put_tlv_u32(out, kTagCounterLimit, counter_limit);
    put_tlv_byte(out, kTagDestroyed, destroyed ? 1 : 0);
    put_tlv(out, kTagRngSeed, ByteView(rng.seed));
    put_tlv(out, kTagRngChainKey, ByteView(rng.chain_key));
    put_tlv_u64(out, kTagRngCounter, rng.counter);
}

void put_group(Bytes& out, const GroupConfig& g) {
    put_tlv_u64(out, kTagGroupQ, g.q);
    put_tlv_u64(out, kTagGroupT, g.t);
    put_tlv_byte(out, kTagSuiteId, g.suite_id);
    put_tlv_byte(out, kTagHashId, g.hash_id);
}

struct CommonFields {
    std::string identity, server_identity;
    std::uint32_t query_counter = 0, counter_limit = 0;
    bool destroyed = false;
    RngState rng;
};

std::optional<CommonFields> read_common(const TlvMap& m) {
    CommonFields c;
    auto identity = m.get_string(kTagIdentity);
    auto server_identity = m.get_string(kTagServerIdentity);
    auto qc = m.get_u32(kTagQueryCounter);
    auto cl = m.get_u32(kTagCounterLimit);
    auto destroyed = m.get_byte(kTagDestroyed);
    auto seed = m.get_bytes(kTagRngSeed, 32);
    auto chain_key = m.get_bytes(kTagRngChainKey, 32);
    auto counter = m.get_u64(kTagRngCounter);
    if (!identity || !server_identity || !qc || !cl || !destroyed || !seed || !chain_key || !counter) {
        return std::nullopt;
    }
    c.identity = std::move(*identity);
    c.server_identity = std::move(*server_identity);
    c.query_counter = *qc;
    c.counter_limit = *cl;
    c.destroyed = *destroyed != 0;
    c.rng = rng_init(*seed, *chain_key);
    c.rng.counter = *counter;
    return c;
}

std::optional<GroupConfig> read_group(const TlvMap& m) {
    auto q = m.get_u64(kTagGroupQ);
    auto t = m.get_u64(kTagGroupT);
    auto suite_id = m.get_byte(kTagSuiteId);
    auto hash_id = m.get_byte(kTagHashId);
    if (!q || !t || !suite_id || !hash_id) return std::nullopt;
    GroupConfig g{*q, *t, *suite_id, *hash_id};
    try {
        g.validate();
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
    return g;
}

}  // namespace

wire::ProtocolId CardImage::protocol() const {
    if (std::holds_alternative<ssca::CardCredential>(credential)) return wire::ProtocolId::ssca;
    if (const auto* p = std::get_if<pscab::CardCredential>(&credential)) return p->protocol();
    return wire::ProtocolId::pscav;
}

bool CardImage::destroyed() const {
    return std::visit([](const auto& c) { return c.destroyed; }, credential);
}

std::uint32_t CardImage::query_counter() const {
    return std::visit([](const auto& c) { return c.query_counter; }, credential);
}

Bytes card_image_encode(const CardImage& image) {
    Bytes out;
    put_tlv_byte(out, kTagProtocol, static_cast<std::uint8_t>(image.protocol()));
    if (const auto* c = std::get_if<ssca::CardCredential>(&image.credential)) {
        put_common(out, c->identity, c->server_identity, c->query_counter, c->counter_limit,
                   c->destroyed, c->rng);
        put_tlv(out, kTagWrappedKey, c->wrapped_key);
    } else if (const auto* c = std::get_if<pscab::CardCredential>(&image.credential)) {
        put_common(out, c->identity, c->params.server_identity, c->query_counter,
                   c->counter_limit, c->destroyed, c->rng);
        put_group(out, c->params.group);
        GroupSuite suite(c->params.group);
        put_tlv(out, kTagBlindedKey, suite.encode(c->blinded_key));
        put_tlv(out, kTagServerGenerator, suite.encode(c->params.server_generator));
    } else if (const auto* c = std::get_if<pscav::CardCredential>(&image.credential)) {
        put_common(out, c->identity, c->server_identity, c->query_counter, c->counter_limit,
                   c->destroyed, c->rng);
        put_group(out, c->group);
        GroupSuite suite(c->group);
        put_tlv(out, kTagBlindedGenerator, suite.encode(c->blinded_generator));
    }
    return out;
}

std::optional<CardImage> card_image_decode(ByteView in) {
    auto m = TlvMap::parse(in);
    if (!m) return std::nullopt;
    auto protocol = m->get_byte(kTagProtocol);
    if (!protocol || !wire::known_protocol(*protocol)) return std::nullopt;
    auto common = read_common(*m);
    if (!common) return std::nullopt;

    CardImage image;
    switch (static_cast<wire::ProtocolId>(*protocol)) {
        case wire::ProtocolId::ssca: {
            auto wrapped = m->get_bytes(kTagWrappedKey, 32);
            if (!wrapped) return std::nullopt;
            ssca::CardCredential c;
            c.identity = common->identity;
            c.server_identity = common->server_identity;
            c.wrapped_key = *wrapped;
            c.rng = common->rng;
            c.query_counter = common->query_counter;
            c.counter_limit = common->counter_limit;
            c.destroyed = common->destroyed;
            image.credential = std::move(c);
            return image;
        }
        case wire::ProtocolId::pscab:
        case wire::ProtocolId::pscabv: {
            auto group = read_group(*m);
            if (!group) return std::nullopt;
            GroupSuite suite(*group);
            const Bytes* blinded = m->find(kTagBlindedKey);
            const Bytes* g_s = m->find(kTagServerGenerator);
            if (!blinded || !g_s) return std::nullopt;
            auto blinded_el = suite.decode_element(*blinded);
            auto g_s_el = suite.decode_element(*g_s);
            if (!blinded_el || !g_s_el) return std::nullopt;
            pscab::CardCredential c;
            c.params.group = *group;
            c.params.generator = suite.generator();
            c.params.server_identity = common->server_identity;
            c.params.server_generator = *g_s_el;
            c.verifier_variant =
                static_cast<wire::ProtocolId>(*protocol) == wire::ProtocolId::pscabv;
            c.identity = common->identity;
            c.blinded_key = *blinded_el;
            c.rng = common->rng;
            c.query_counter = common->query_counter;
            c.counter_limit = common->counter_limit;
            c.destroyed = common->destroyed;
            image.credential = std::move(c);
            return image;
        }
        case wire::ProtocolId::pscav: {
            auto group = read_group(*m);
            if (!group) return std::nullopt;
            GroupSuite suite(*group);
            const Bytes* blinded = m->find(kTagBlindedGenerator);
            if (!blinded) return std::nullopt;
            auto blinded_el = suite.decode_element(*blinded);
            if (!blinded_el) return std::nullopt;
            pscav::CardCredential c;
            c.group = *group;
            c.identity = common->identity;
            c.server_identity = common->server_identity;
            c.blinded_generator = *blinded_el;
            c.rng = common->rng;
            c.query_counter = common->query_counter;
            c.counter_limit = common->counter_limit;
            c.destroyed = common->destroyed;
            image.credential = std::move(c);
            return image;
        }
    }
    return std::nullopt;
}

void card_image_save(const std::string& path, const CardImage& image) {
    Bytes data = card_image_encode(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write card image: " + path);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("short write to card image: " + path);
}

CardImage card_image_load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read card image: " + path);
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto image = card_image_decode(data);
    if (!image) throw std::runtime_error("malformed card image: " + path);
    return std::move(*image);
}

}  // namespace scauth
