#include "sphtraffic/config_io.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace sphtraffic {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError("config field '" + path + "': " + what);
}

void check_keys(const Json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) fail(path.empty() ? key : path + "." + key, "unknown key");
    }
}

double get_num(const Json& obj, const std::string& path, const char* key,
               double fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) fail(path + "." + key, "missing required field");
        return fallback;
    }
    const Json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

std::uint64_t get_u64(const Json& obj, const std::string& path, const char* key,
                      std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_number_unsigned()) fail(path + "." + key, "expected an unsigned integer");
    return v.get<std::uint64_t>();
}

std::string get_str(const Json& obj, const std::string& path, const char* key,
                    const std::string& fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) fail(path + "." + key, "missing required field");
        return fallback;
    }
    const Json& v = obj.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

bool get_bool(const Json& obj, const std::string& path, const char* key,
              bool fallback) {
    if (!obj.contains(key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
    return v.get<bool>();
}

NetworkSpec parse_network(const Json& j, const std::string& path) {
    check_keys(j, path, {"nodes", "segments", "entries", "destinations"});
    NetworkSpec net;
    if (!j.contains("nodes") || !j.at("nodes").is_array())
        fail(path + ".nodes", "expected an array");
    for (std::size_t i = 0; i < j.at("nodes").size(); ++i) {
        const Json& n = j.at("nodes")[i];
        const std::string p = path + ".nodes[" + std::to_string(i) + "]";
        check_keys(n, p, {"id", "x", "y"});
        NodeSpec node;
        node.id = get_str(n, p, "id", "", true);
        node.position = {get_num(n, p, "x", 0.0, true), get_num(n, p, "y", 0.0, true)};
        net.nodes.push_back(node);
    }
    if (!j.contains("segments") || !j.at("segments").is_array())
        fail(path + ".segments", "expected an array");
    for (std::size_t i = 0; i < j.at("segments").size(); ++i) {
        const Json& s = j.at("segments")[i];
        const std::string p = path + ".segments[" + std::to_string(i) + "]";
        check_keys(s, p,
                   {"id", "from", "to", "length", "advance", "v_free", "lanes",
                    "polyline"});
        SegmentSpec seg;
        seg.id = get_str(s, p, "id", "", true);
        seg.from = get_str(s, p, "from", "", true);
        seg.to = get_str(s, p, "to", "", true);
        seg.length = get_num(s, p, "length", 0.0, true);
        seg.advance = get_num(s, p, "advance", 0.0, true);
        seg.v_free = get_num(s, p, "v_free", 0.0, true);
        const double lanes = get_num(s, p, "lanes", 1.0);
        if (lanes < 1.0 || lanes != static_cast<int>(lanes))
            fail(p + ".lanes", "expected a positive integer");
        seg.lanes = static_cast<int>(lanes);
        if (s.contains("polyline")) {
            const Json& poly = s.at("polyline");
            if (!poly.is_array()) fail(p + ".polyline", "expected an array of [x,y]");
            for (const auto& pt : poly) {
                if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() ||
                    !pt[1].is_number())
                    fail(p + ".polyline", "expected [x, y] pairs");
                seg.polyline.push_back({pt[0].get<double>(), pt[1].get<double>()});
            }
        }
        net.segments.push_back(std::move(seg));
    }
    auto parse_names = [&](const char* key, std::vector<std::string>& out) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_array()) fail(path + "." + key, "expected an array");
        for (const auto& v : j.at(key)) {
            if (!v.is_string()) fail(path + "." + key, "expected strings");
            out.push_back(v.get<std::string>());
        }
    };
    parse_names("entries", net.entries);
    parse_names("destinations", net.destinations);
    return net;
}

PhysicsParams parse_physics(const Json& j, const std::string& path) {
    check_keys(j, path,
               {"g", "k", "rho_rest", "gamma", "a_coef", "b_coef", "xi", "h", "eta2",
                "visc_c1", "visc_c2", "pressure_form"});
    PhysicsParams p;
    p.g = get_num(j, path, "g", p.g);
    p.k = get_num(j, path, "k", p.k);
    p.rho_rest = get_num(j, path, "rho_rest", p.rho_rest);
    p.gamma = get_num(j, path, "gamma", p.gamma);
    p.a_coef = get_num(j, path, "a_coef", p.a_coef);
    p.b_coef = get_num(j, path, "b_coef", p.b_coef);
    p.xi = get_num(j, path, "xi", p.xi);
    p.h = get_num(j, path, "h", p.h);
    p.eta2 = get_num(j, path, "eta2", p.eta2);
    p.visc_c1 = get_num(j, path, "visc_c1", p.visc_c1);
    p.visc_c2 = get_num(j, path, "visc_c2", p.visc_c2);
    const std::string form = get_str(j, path, "pressure_form", "abridged");
    if (form == "abridged") p.pressure_form = PressureForm::abridged;
    else if (form == "full") p.pressure_form = PressureForm::full;
    else fail(path + ".pressure_form", "expected 'abridged' or 'full'");
    return p;
}

ClassMix parse_mix(const Json& j, const std::string& path) {
    check_keys(j, path, {"car", "truck", "bus"});
    ClassMix mix;
    mix.car = get_num(j, path, "car", 0.0);
    mix.truck = get_num(j, path, "truck", 0.0);
    mix.bus = get_num(j, path, "bus", 0.0);
    return mix;
}

PolicyKind parse_policy_kind(const std::string& kind, const std::string& path) {
    if (kind == "sph" || kind == "sph-dynamic") return PolicyKind::sph_dynamic;
    if (kind == "blind" || kind == "blind-greedy") return PolicyKind::blind_greedy;
    fail(path, "expected 'sph' or 'blind'");
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& json_text,
                                 const std::string& origin) {
    Json root;
    try {
        root = Json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    check_keys(root, "",
               {"name", "network", "demand", "initial_agents", "physics", "policy",
                "classes", "run"});
    ScenarioConfig cfg;
    cfg.name = get_str(root, "", "name", "unnamed");
    if (!root.contains("network")) fail("network", "missing required field");
    cfg.network = parse_network(root.at("network"), "network");

    if (root.contains("demand")) {
        const Json& dj = root.at("demand");
        if (!dj.is_array()) fail("demand", "expected an array");
        for (std::size_t i = 0; i < dj.size(); ++i) {
            const Json& d = dj[i];
            const std::string p = "demand[" + std::to_string(i) + "]";
            check_keys(d, p, {"entry", "rate", "class_mix", "destinations"});
            EntryDemand demand;
            demand.entry = get_str(d, p, "entry", "", true);
            demand.rate = get_num(d, p, "rate", 0.0, true);
            if (d.contains("class_mix"))
                demand.mix = parse_mix(d.at("class_mix"), p + ".class_mix");
            if (!d.contains("destinations") || !d.at("destinations").is_array())
                fail(p + ".destinations", "expected an array");
            for (std::size_t q = 0; q < d.at("destinations").size(); ++q) {
                const Json& dest = d.at("destinations")[q];
                const std::string dp = p + ".destinations[" + std::to_string(q) + "]";
                check_keys(dest, dp, {"node", "share"});
                demand.destinations.emplace_back(get_str(dest, dp, "node", "", true),
                                                 get_num(dest, dp, "share", 0.0, true));
            }
            cfg.demand.push_back(std::move(demand));
        }
    }

    if (root.contains("initial_agents")) {
        const Json& ij = root.at("initial_agents");
        if (!ij.is_array()) fail("initial_agents", "expected an array");
        for (std::size_t i = 0; i < ij.size(); ++i) {
            const Json& a = ij[i];
            const std::string p = "initial_agents[" + std::to_string(i) + "]";
            check_keys(a, p,
                       {"segment", "count", "start_s", "spacing", "destination",
                        "class"});
            InitialPlacement place;
            place.segment = get_str(a, p, "segment", "", true);
            place.count = static_cast<std::uint32_t>(get_num(a, p, "count", 0.0, true));
            place.start_s = get_num(a, p, "start_s", 0.0);
            place.spacing = get_num(a, p, "spacing", 8.0);
            place.destination = get_str(a, p, "destination", "", true);
            place.vehicle_class = get_str(a, p, "class", "car");
            cfg.initial_agents.push_back(std::move(place));
        }
    }

    if (root.contains("physics"))
        cfg.physics = parse_physics(root.at("physics"), "physics");

    if (root.contains("policy")) {
        const Json& pj = root.at("policy");
        check_keys(pj, "policy", {"kind", "probe_offset", "noncompliance_prob"});
        cfg.policy.kind =
            parse_policy_kind(get_str(pj, "policy", "kind", "sph"), "policy.kind");
        cfg.policy.probe_offset = get_num(pj, "policy", "probe_offset", 0.0);
        cfg.policy.noncompliance_prob = get_num(pj, "policy", "noncompliance_prob", 0.0);
    }

    if (root.contains("classes")) {
        const Json& cj = root.at("classes");
        check_keys(cj, "classes", {"car", "truck", "bus"});
        auto parse_class = [&](const char* key, ClassSpec& spec) {
            if (!cj.contains(key)) return;
            const std::string p = std::string("classes.") + key;
            check_keys(cj.at(key), p, {"mass", "v_mult"});
            spec.mass = get_num(cj.at(key), p, "mass", spec.mass);
            spec.v_mult = get_num(cj.at(key), p, "v_mult", spec.v_mult);
        };
        parse_class("car", cfg.classes.car);
        parse_class("truck", cfg.classes.truck);
        parse_class("bus", cfg.classes.bus);
    }

    if (root.contains("run")) {
        const Json& rj = root.at("run");
        check_keys(rj, "run",
                   {"dt", "duration", "seed", "speed_clamp", "arrived_mode",
                    "s_min_gap", "metrics_segments", "route_sets", "density_grid_n",
                    "density_grid_period", "congestion"});
        cfg.run.dt = get_num(rj, "run", "dt", cfg.run.dt);
        cfg.run.duration = get_num(rj, "run", "duration", cfg.run.duration);
        cfg.run.seed = get_u64(rj, "run", "seed", cfg.run.seed);
        cfg.run.speed_clamp = get_bool(rj, "run", "speed_clamp", cfg.run.speed_clamp);
        const std::string mode = get_str(rj, "run", "arrived_mode", "sink");
        if (mode == "sink") cfg.run.arrived_mode = ArrivedMode::sink;
        else if (mode == "park") cfg.run.arrived_mode = ArrivedMode::park;
        else fail("run.arrived_mode", "expected 'sink' or 'park'");
        cfg.run.s_min_gap = get_num(rj, "run", "s_min_gap", cfg.run.s_min_gap);
        if (rj.contains("metrics_segments")) {
            if (!rj.at("metrics_segments").is_array())
                fail("run.metrics_segments", "expected an array");
            for (const auto& v : rj.at("metrics_segments"))
                cfg.run.metrics_segments.push_back(v.get<std::string>());
        }
        if (rj.contains("route_sets")) {
            const Json& rs = rj.at("route_sets");
            if (!rs.is_array()) fail("run.route_sets", "expected an array");
            for (std::size_t i = 0; i < rs.size(); ++i) {
                const std::string p = "run.route_sets[" + std::to_string(i) + "]";
                check_keys(rs[i], p, {"name", "segments"});
                RouteSet set;
                set.name = get_str(rs[i], p, "name", "", true);
                if (!rs[i].contains("segments") || !rs[i].at("segments").is_array())
                    fail(p + ".segments", "expected an array");
                for (const auto& v : rs[i].at("segments"))
                    set.segments.push_back(v.get<std::string>());
                cfg.run.route_sets.push_back(std::move(set));
            }
        }
        cfg.run.density_grid_n = static_cast<int>(
            get_num(rj, "run", "density_grid_n", cfg.run.density_grid_n));
        cfg.run.density_grid_period =
            get_num(rj, "run", "density_grid_period", cfg.run.density_grid_period);
        if (rj.contains("congestion")) {
            const Json& cj = rj.at("congestion");
            check_keys(cj, "run.congestion", {"v_jam_frac", "occ_frac", "window"});
            cfg.run.congestion.v_jam_frac =
                get_num(cj, "run.congestion", "v_jam_frac", cfg.run.congestion.v_jam_frac);
            cfg.run.congestion.occ_frac =
                get_num(cj, "run.congestion", "occ_frac", cfg.run.congestion.occ_frac);
            cfg.run.congestion.window =
                get_num(cj, "run.congestion", "window", cfg.run.congestion.window);
        }
    }
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string serialize_config(const ScenarioConfig& cfg) {
    Json root;
    root["name"] = cfg.name;
    Json net;
    net["nodes"] = Json::array();
    for (const auto& n : cfg.network.nodes)
        net["nodes"].push_back({{"id", n.id}, {"x", n.position.x}, {"y", n.position.y}});
    net["segments"] = Json::array();
    for (const auto& s : cfg.network.segments) {
        Json seg{{"id", s.id},         {"from", s.from},     {"to", s.to},
                 {"length", s.length}, {"advance", s.advance},
                 {"v_free", s.v_free}, {"lanes", s.lanes}};
        if (!s.polyline.empty()) {
            Json poly = Json::array();
            for (const auto& p : s.polyline) poly.push_back({p.x, p.y});
            seg["polyline"] = poly;
        }
        net["segments"].push_back(seg);
    }
    net["entries"] = cfg.network.entries;
    net["destinations"] = cfg.network.destinations;
    root["network"] = net;

    root["demand"] = Json::array();
    for (const auto& d : cfg.demand) {
        Json dj{{"entry", d.entry},
                {"rate", d.rate},
                {"class_mix",
                 {{"car", d.mix.car}, {"truck", d.mix.truck}, {"bus", d.mix.bus}}}};
        dj["destinations"] = Json::array();
        for (const auto& [id, w] : d.destinations)
            dj["destinations"].push_back({{"node", id}, {"share", w}});
        root["demand"].push_back(dj);
    }

    root["initial_agents"] = Json::array();
    for (const auto& a : cfg.initial_agents)
        root["initial_agents"].push_back({{"segment", a.segment},
                                          {"count", a.count},
                                          {"start_s", a.start_s},
                                          {"spacing", a.spacing},
                                          {"destination", a.destination},
                                          {"class", a.vehicle_class}});

    root["physics"] = {{"g", cfg.physics.g},
                       {"k", cfg.physics.k},
                       {"rho_rest", cfg.physics.rho_rest},
                       {"gamma", cfg.physics.gamma},
                       {"a_coef", cfg.physics.a_coef},
                       {"b_coef", cfg.physics.b_coef},
                       {"xi", cfg.physics.xi},
                       {"h", cfg.physics.h},
                       {"eta2", cfg.physics.eta2},
                       {"visc_c1", cfg.physics.visc_c1},
                       {"visc_c2", cfg.physics.visc_c2},
                       {"pressure_form",
                        cfg.physics.pressure_form == PressureForm::full ? "full"
                                                                        : "abridged"}};
    root["policy"] = {
        {"kind", cfg.policy.kind == PolicyKind::sph_dynamic ? "sph" : "blind"},
        {"probe_offset", cfg.policy.probe_offset},
        {"noncompliance_prob", cfg.policy.noncompliance_prob}};
    root["classes"] = {
        {"car", {{"mass", cfg.classes.car.mass}, {"v_mult", cfg.classes.car.v_mult}}},
        {"truck",
         {{"mass", cfg.classes.truck.mass}, {"v_mult", cfg.classes.truck.v_mult}}},
        {"bus", {{"mass", cfg.classes.bus.mass}, {"v_mult", cfg.classes.bus.v_mult}}}};

    Json run;
    run["dt"] = cfg.run.dt;
    run["duration"] = cfg.run.duration;
    run["seed"] = cfg.run.seed;
    run["speed_clamp"] = cfg.run.speed_clamp;
    run["arrived_mode"] = cfg.run.arrived_mode == ArrivedMode::park ? "park" : "sink";
    run["s_min_gap"] = cfg.run.s_min_gap;
    run["metrics_segments"] = cfg.run.metrics_segments;
    run["route_sets"] = Json::array();
    for (const auto& rs : cfg.run.route_sets)
        run["route_sets"].push_back({{"name", rs.name}, {"segments", rs.segments}});
    run["density_grid_n"] = cfg.run.density_grid_n;
    run["density_grid_period"] = cfg.run.density_grid_period;
    run["congestion"] = {{"v_jam_frac", cfg.run.congestion.v_jam_frac},
                         {"occ_frac", cfg.run.congestion.occ_frac},
                         {"window", cfg.run.congestion.window}};
    root["run"] = run;
    return root.dump(2);
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
    const std::string text = serialize_config(cfg);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

bool config_equal(const ScenarioConfig& a, const ScenarioConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

ScenarioConfig load_scenario(const std::string& spec) {
    const std::string prefix = "builtin:";
    if (spec.rfind(prefix, 0) == 0) return builtin_scenario(spec.substr(prefix.size()));
    return parse_config_file(spec);
}

}  // namespace sphtraffic
