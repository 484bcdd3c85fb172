#include "genidx/config.hpp"

#include <fstream>
#include <map>

#include <json.hpp>

namespace genidx {

using nlohmann::json;

/*----------------------------------------------------------------------------
 * Structural hash
 *--------------------------------------------------------------------------*/

namespace {

void hash_part(Fnv1a &h, const PartitioningFunction &p) {
    std::visit([&](const auto &f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, RangePivots>) {
            h.u8(1);
            h.u64(f.pivots.size());
            for (key_type k : f.pivots) h.u64(k);
        } else if constexpr (std::is_same_v<T, LinearModel>) {
            h.u8(2);
            h.bytes(&f.slope, sizeof f.slope);
            h.bytes(&f.intercept, sizeof f.intercept);
            h.u64(f.bins);
        } else if constexpr (std::is_same_v<T, BitSuffix>) {
            h.u8(3);
            h.u64(f.width);
        } else {
            h.u8(4);
            h.u64(f.start);
            h.u64(f.width);
        }
    }, p.variant());
}

void hash_node(Fnv1a &h, const NodeConfig &n) {
    h.u8(n.part ? 1 : 0);
    if (n.part) hash_part(h, *n.part);
    h.u8(n.ri ? 1 : 0);
    if (n.ri) {
        h.u8(static_cast<std::uint8_t>(n.ri->layout));
        h.u8(static_cast<std::uint8_t>(n.ri->search));
        h.u64(n.ri->entries.size());
        for (const auto &[dom, kids] : n.ri->entries) {
            h.u64(dom);
            h.u64(kids.size());
            for (std::size_t k : kids) h.u64(k);
        }
    }
    h.u8(static_cast<std::uint8_t>(n.dt_layout));
    h.u8(static_cast<std::uint8_t>(n.dt_search));
    h.u64(n.children.size());
    for (const NodeConfig &c : n.children) hash_node(h, c);
}

} // namespace

std::uint64_t IndexConfig::structural_hash() const {
    Fnv1a h;
    h.u64(capacity_limit);
    h.u64(roots.size());
    for (const NodeConfig &r : roots) hash_node(h, r);
    return h.digest();
}

/*----------------------------------------------------------------------------
 * Extraction from a physical index
 *--------------------------------------------------------------------------*/

namespace {

NodeConfig node_to_config(const PhysicalIndex &index, node_id id, std::vector<bool> &claimed) {
    const PhysicalNode &n = index.node(id);
    NodeConfig cfg;
    cfg.part = n.part;
    cfg.dt_layout = n.dt.layout;
    cfg.dt_search = n.dt.search;
    if (n.ri) {
        NodeConfig::Ri ri;
        ri.layout = n.ri->layout;
        ri.search = n.ri->search;
        std::map<node_id, std::size_t> ordinal;
        std::vector<node_id> child_ids;
        for (const auto &[dom, targets] : n.ri->canonical()) {
            std::vector<std::size_t> kids;
            kids.reserve(targets.size());
            for (node_id t : targets) {
                auto it = ordinal.find(t);
                if (it == ordinal.end()) {
                    it = ordinal.emplace(t, child_ids.size()).first;
                    child_ids.push_back(t);
                }
                kids.push_back(it->second);
            }
            ri.entries.emplace_back(dom, std::move(kids));
        }
        cfg.ri = std::move(ri);
        for (node_id c : child_ids) {
            if (claimed[c])
                throw ConfigError("index is not tree-shaped; node " + std::to_string(c) +
                                  " has more than one parent");
            claimed[c] = true;
            cfg.children.push_back(node_to_config(index, c, claimed));
        }
    }
    return cfg;
}

} // namespace

IndexConfig to_config(const PhysicalIndex &index) {
    IndexConfig cfg;
    cfg.capacity_limit = index.capacity_limit();
    std::vector<bool> claimed(index.node_count(), false);
    for (node_id sn : index.start_nodes()) {
        if (claimed[sn])
            throw ConfigError("start node " + std::to_string(sn) + " claimed twice");
        claimed[sn] = true;
        cfg.roots.push_back(node_to_config(index, sn, claimed));
    }
    return cfg;
}

/*----------------------------------------------------------------------------
 * JSON round trip
 *--------------------------------------------------------------------------*/

namespace {

json part_to_json(const PartitioningFunction &p) {
    return std::visit([](const auto &f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, RangePivots>) {
            /* Boundaries live in the routing entries; no duplication here. */
            return json{{"kind", "range"}};
        } else if constexpr (std::is_same_v<T, LinearModel>) {
            return json{{"kind", "linear"}, {"slope", f.slope},
                        {"intercept", f.intercept}, {"bins", f.bins}};
        } else if constexpr (std::is_same_v<T, BitSuffix>) {
            return json{{"kind", "bit_suffix"}, {"width", f.width}};
        } else {
            return json{{"kind", "bit_prefix"}, {"start", f.start}, {"width", f.width}};
        }
    }, p.variant());
}

json node_to_json(const NodeConfig &n) {
    json j = json::object();
    if (n.part) j["part"] = part_to_json(*n.part);
    if (n.ri) {
        json entries = json::array();
        for (const auto &[dom, kids] : n.ri->entries)
            entries.push_back(json{{"dom", dom}, {"children", kids}});
        j["ri"] = json{{"layout", to_string(n.ri->layout)},
                       {"search", to_string(n.ri->search)},
                       {"entries", std::move(entries)}};
    }
    j["dt"] = json{{"layout", to_string(n.dt_layout)}, {"search", to_string(n.dt_search)}};
    if (not n.children.empty()) {
        json kids = json::array();
        for (const NodeConfig &c : n.children) kids.push_back(node_to_json(c));
        j["children"] = std::move(kids);
    }
    return j;
}

DataLayout layout_from_json(const json &j) {
    DataLayout l;
    if (not parse_layout(j.get<std::string>(), l))
        throw ConfigError("unknown data layout: " + j.get<std::string>());
    return l;
}

SearchMethod search_from_json(const json &j) {
    SearchMethod s;
    if (not parse_search(j.get<std::string>(), s))
        throw ConfigError("unknown search method: " + j.get<std::string>());
    return s;
}

NodeConfig node_from_json(const json &j) {
    NodeConfig n;
    if (j.contains("ri")) {
        const json &ri = j.at("ri");
        NodeConfig::Ri r;
        r.layout = layout_from_json(ri.at("layout"));
        r.search = search_from_json(ri.at("search"));
        for (const json &e : ri.at("entries"))
            r.entries.emplace_back(e.at("dom").get<std::uint64_t>(),
                                   e.at("children").get<std::vector<std::size_t>>());
        n.ri = std::move(r);
    }
    if (j.contains("part")) {
        const json &p = j.at("part");
        std::string kind = p.at("kind").get<std::string>();
        if (kind == "range") {
            if (not n.ri) throw ConfigError("range partitioning needs routing entries");
            RangePivots rp;
            for (std::size_t i = 0; i < n.ri->entries.size(); ++i) {
                if (i == 0) {
                    if (n.ri->entries[i].first != 0)
                        throw ConfigError("first range boundary must be 0");
                } else {
                    rp.pivots.push_back(n.ri->entries[i].first);
                }
            }
            n.part = PartitioningFunction(std::move(rp));
        } else if (kind == "linear") {
            n.part = PartitioningFunction(LinearModel{p.at("slope").get<double>(),
                                                      p.at("intercept").get<double>(),
                                                      p.at("bins").get<std::uint64_t>()});
        } else if (kind == "bit_suffix") {
            n.part = PartitioningFunction(BitSuffix{p.at("width").get<unsigned>()});
        } else if (kind == "bit_prefix") {
            n.part = PartitioningFunction(BitPrefix{p.at("start").get<unsigned>(),
                                                    p.at("width").get<unsigned>()});
        } else {
            throw ConfigError("unknown partitioning kind: " + kind);
        }
    }
    if (n.ri and not n.part) throw ConfigError("routing entries need a partitioning function");
    const json &dt = j.at("dt");
    n.dt_layout = layout_from_json(dt.at("layout"));
    n.dt_search = search_from_json(dt.at("search"));
    if (j.contains("children")) {
        std::size_t claimable = j.at("children").size();
        for (const json &c : j.at("children")) n.children.push_back(node_from_json(c));
        if (n.ri)
            for (const auto &[dom, kids] : n.ri->entries)
                for (std::size_t k : kids)
                    if (k >= claimable)
                        throw ConfigError("routing entry references child ordinal out of range");
    } else if (n.ri) {
        for (const auto &[dom, kids] : n.ri->entries)
            if (not kids.empty())
                throw ConfigError("routing entry references children but none are defined");
    }
    return n;
}

} // namespace

std::string IndexConfig::to_json(int indent) const {
    json j;
    j["format"] = "genidx.index_config";
    j["version"] = version;
    j["capacity_limit"] = capacity_limit;
    json m = json::object();
    if (not meta.dataset_name.empty()) m["dataset_name"] = meta.dataset_name;
    if (meta.dataset_fingerprint != 0) m["dataset_fingerprint"] = meta.dataset_fingerprint;
    if (meta.origin_size != 0) m["origin_size"] = meta.origin_size;
    if (meta.found_generation) m["found_generation"] = *meta.found_generation;
    if (meta.found_fitness) m["found_fitness"] = *meta.found_fitness;
    j["metadata"] = std::move(m);
    json roots_json = json::array();
    for (const NodeConfig &r : roots) roots_json.push_back(node_to_json(r));
    j["roots"] = std::move(roots_json);
    return j.dump(indent);
}

IndexConfig IndexConfig::from_json(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "genidx.index_config")
            throw ConfigError("not an index config document");
        if (j.at("version").get<int>() != version)
            throw ConfigError("unsupported index config version");
        IndexConfig cfg;
        cfg.capacity_limit = j.value("capacity_limit", default_node_capacity);
        if (j.contains("metadata")) {
            const json &m = j.at("metadata");
            cfg.meta.dataset_name = m.value("dataset_name", std::string{});
            cfg.meta.dataset_fingerprint = m.value("dataset_fingerprint", std::uint64_t{0});
            cfg.meta.origin_size = m.value("origin_size", std::uint64_t{0});
            if (m.contains("found_generation"))
                cfg.meta.found_generation = m.at("found_generation").get<std::uint64_t>();
            if (m.contains("found_fitness"))
                cfg.meta.found_fitness = m.at("found_fitness").get<double>();
        }
        for (const json &r : j.at("roots")) cfg.roots.push_back(node_from_json(r));
        if (cfg.roots.empty()) throw ConfigError("index config has no root node");
        return cfg;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed index config: ") + e.what());
    }
}

void IndexConfig::save(const std::string &path) const {
    std::ofstream out(path);
    if (not out) throw ConfigError("cannot open " + path + " for writing");
    out << to_json() << '\n';
}

IndexConfig IndexConfig::load(const std::string &path) {
    std::ifstream in(path);
    if (not in) throw ConfigError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

} // namespace genidx
