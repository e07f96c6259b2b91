#include "greennet/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "greennet/errors.hpp"

namespace greennet {

using json = nlohmann::json;

namespace {

// Object view that remembers which keys were read, so leftovers can be
// reported as unknown.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail("expected an object");
    }

    const std::string& path() const { return path_; }
    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    [[noreturn]] void fail(const std::string& message) const { throw ScenarioError(path_, message); }
    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        throw ScenarioError(child(key), message);
    }

    bool has(const std::string& key) {
        if (!j_.contains(key)) return false;
        seen_.insert(key);
        return true;
    }

    const json& raw(const std::string& key) {
        if (!has(key)) fail(key, "required field is missing");
        return j_.at(key);
    }

    Node object(const std::string& key) { return Node(raw(key), child(key)); }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) fail(key, "expected a number");
        return v.get<double>();
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    long long integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer()) fail(key, "expected an integer");
        return v.get<long long>();
    }
    long long integer(const std::string& key, long long fallback) { return has(key) ? integer(key) : fallback; }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) fail(key, "expected true or false");
        return v.get<bool>();
    }

    std::string text(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }
    std::string text(const std::string& key, const std::string& fallback) {
        return has(key) ? text(key) : fallback;
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of numbers");
        std::vector<double> out;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!v[k].is_number()) throw ScenarioError(child(key) + "[" + std::to_string(k) + "]", "expected a number");
            out.push_back(v[k].get<double>());
        }
        return out;
    }

    std::vector<int> integers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array of integers");
        std::vector<int> out;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!v[k].is_number_integer()) {
                throw ScenarioError(child(key) + "[" + std::to_string(k) + "]", "expected an integer");
            }
            out.push_back(v[k].get<int>());
        }
        return out;
    }

    std::vector<Node> objects(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) fail(key, "expected an array");
        std::vector<Node> out;
        for (std::size_t k = 0; k < v.size(); ++k) out.emplace_back(v[k], child(key) + "[" + std::to_string(k) + "]");
        return out;
    }

    // Rejects keys nobody asked for.
    void close() const {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) throw ScenarioError(child(item.key()), "unknown key");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

// Runs a validate() and pins any ValidationError to a field path.
template <typename F>
void checked(const std::string& path, F&& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        throw ScenarioError(path, e.what());
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

int bandwidth_field(Node& n, const std::string& key, int fallback) {
    if (!n.has(key)) return fallback;
    const auto bw = n.integer(key);
    for (int b : kBandwidthsMhz) {
        if (b == bw) return b;
    }
    n.fail(key, "bandwidth must be one of 5, 10, 15, 20 MHz");
}

ServiceDist service_field(Node& n) {
    const std::string s = n.text("service", "deterministic");
    if (s == "deterministic") return ServiceDist::Deterministic;
    if (s == "exponential") return ServiceDist::Exponential;
    if (s == "lognormal") return ServiceDist::LogNormal;
    n.fail("service", "expected deterministic, exponential or lognormal");
}

struct ProfileCache {
    std::filesystem::path base;
    std::map<std::filesystem::path, std::shared_ptr<const HourlySeries>> loaded;

    std::shared_ptr<const HourlySeries> get(const std::string& field, const std::string& name) {
        if (name == "flat") return nullptr;
        const auto path = resolve(base, name);
        auto it = loaded.find(path);
        if (it != loaded.end()) return it->second;
        if (!std::filesystem::exists(path)) throw ScenarioError(field, "file not found: " + path.string());
        std::shared_ptr<const HourlySeries> series;
        checked(field, [&] { series = std::make_shared<const HourlySeries>(read_hourly_csv(path)); });
        loaded.emplace(path, series);
        return series;
    }
};

SiteConfig parse_site(Node& n, int default_bw, const std::string& default_profile, ProfileCache& profiles) {
    SiteConfig s;
    s.id = n.text("id");
    if (s.id.empty()) n.fail("id", "must not be empty");
    checked(n.child("kind"), [&] { s.kind = bs_kind_from_string(n.text("kind")); });
    const int bw = bandwidth_field(n, "bandwidth_mhz", default_bw);
    const EnergySystemDesign ref = reference_design(s.kind, bw);

    s.power = default_power_params(s.kind, bw);
    if (n.has("power")) {
        Node p = n.object("power");
        s.power.n_trx = static_cast<int>(p.integer("n_trx", s.power.n_trx));
        s.power.p_max_w = p.number("p_max_w", s.power.p_max_w);
        s.power.p0_w = p.number("p0_w", s.power.p0_w);
        s.power.delta_p = p.number("delta_p", s.power.delta_p);
        s.power.p_sleep_w = p.number("p_sleep_w", s.power.p_sleep_w);
        p.close();
        checked(p.path(), [&] { s.power.validate(); });
    }
    if (n.has("traffic")) {
        const auto v = n.numbers("traffic");
        if (v.size() != 24) n.fail("traffic", "expected 24 hourly values");
        std::array<double, 24> a{};
        std::copy(v.begin(), v.end(), a.begin());
        checked(n.child("traffic"), [&] { s.traffic = TrafficProfile(a); });
    }
    s.ac_load_kwh_yr = n.number("ac_load_kwh_yr", s.kind == BsKind::Macro ? 130.0 : 0.0);
    s.bus_v = n.number("bus_v", kDefaultBusVoltage);

    std::string profile = default_profile;
    s.pv.rated_kw = ref.pv_kw;
    s.pv.tracking_gain = 1.434;
    if (n.has("pv")) {
        Node p = n.object("pv");
        s.pv.rated_kw = p.number("rated_kw", s.pv.rated_kw);
        s.pv.derating = p.number("derating", s.pv.derating);
        s.pv.psh = p.number("psh", s.pv.psh);
        s.pv.tracking_gain = p.number("tracking_gain", s.pv.tracking_gain);
        profile = p.text("profile", profile);
        p.close();
        checked(p.path(), [&] { s.pv.validate(); });
    }
    s.pv.hourly_profile = profiles.get(n.child("pv.profile"), profile);

    BgConfig bg;
    s.bg_kw = ref.bg_kw;
    double cap = -1.0;
    if (n.has("bg")) {
        Node b = n.object("bg");
        s.bg_kw = b.number("rated_kw", s.bg_kw);
        bg.biomass_tons_yr = b.number("biomass_tons_yr", bg.biomass_tons_yr);
        bg.cv_kcal_kg = b.number("cv_kcal_kg", bg.cv_kcal_kg);
        bg.efficiency = b.number("efficiency", bg.efficiency);
        bg.t_op = b.number("t_op", bg.t_op);
        bg.capacity_factor = b.number("capacity_factor", bg.capacity_factor);
        cap = b.number("annual_cap_kwh", -1.0);
        b.close();
        if (!(bg.t_op > 0.0)) b.fail("t_op", "must be positive");
    }
    // Without an explicit cap the feedstock supply limits annual output.
    checked(n.child("bg"), [&] {
        s.bg_annual_cap_kwh = cap >= 0.0 ? cap : bg_annual_kwh(bg_power_kw(bg), bg.capacity_factor);
    });

    s.battery.n_batt = ref.batt_units;
    if (n.has("battery")) {
        Node b = n.object("battery");
        s.battery.n_batt = static_cast<int>(b.integer("units", s.battery.n_batt));
        s.battery.v_nom = b.number("v_nom", s.battery.v_nom);
        s.battery.q_nom_ah = b.number("q_nom_ah", s.battery.q_nom_ah);
        s.battery.soc_min_pct = b.number("soc_min_pct", s.battery.soc_min_pct);
        s.battery.dod = b.number("dod", s.battery.dod);
        s.battery.kb = b.number("kb", s.battery.kb);
        s.battery.lifetime_throughput_kwh = b.number("lifetime_throughput_kwh", s.battery.lifetime_throughput_kwh);
        s.battery.float_life_yr = b.number("float_life_yr", s.battery.float_life_yr);
        s.battery.round_trip_eff = b.number("round_trip_eff", s.battery.round_trip_eff);
        b.close();
        checked(b.child("units"), [&] { s.battery.validate(s.bus_v); });
    }

    s.conv_kw = ref.conv_kw;
    if (n.has("converter")) {
        Node c = n.object("converter");
        s.conv_kw = c.number("rated_kw", s.conv_kw);
        s.conv_eff = c.number("efficiency", s.conv_eff);
        c.close();
    }
    n.close();
    checked(n.path(), [&] { s.validate(); });
    return s;
}

ShareLink parse_link(Node& n) {
    ShareLink l;
    l.from_site = n.text("from");
    l.to_site = n.text("to");
    l.bus_voltage_v = n.number("bus_v", kDefaultBusVoltage);
    if (n.has("resistance_ohm")) {
        l.resistance_ohm = n.number("resistance_ohm");
        if (n.has("radius_km")) n.fail("radius_km", "give either resistance_ohm or radius_km, not both");
    } else {
        const double radius = n.number("radius_km");
        const double per_km = n.number("ohm_per_km", 3.276);
        checked(n.path(), [&] { l.resistance_ohm = line_resistance(radius, per_km); });
    }
    n.close();
    if (!(l.resistance_ohm > 0.0)) n.fail("resistance_ohm", "must be positive");
    return l;
}

PriceTable parse_prices(Node& n) {
    PriceTable p;
    p.pv_cc_per_kw = n.number("pv_cc_per_kw", p.pv_cc_per_kw);
    p.pv_rc_per_kw = n.number("pv_rc_per_kw", p.pv_rc_per_kw);
    p.pv_om_per_kw_yr = n.number("pv_om_per_kw_yr", p.pv_om_per_kw_yr);
    p.pv_life_yr = n.number("pv_life_yr", p.pv_life_yr);
    p.bg_cc_per_kw = n.number("bg_cc_per_kw", p.bg_cc_per_kw);
    p.bg_rc_per_kw = n.number("bg_rc_per_kw", p.bg_rc_per_kw);
    p.bg_om_per_hour = n.number("bg_om_per_hour", p.bg_om_per_hour);
    p.bg_life_hours = n.number("bg_life_hours", p.bg_life_hours);
    p.fuel_per_tonne = n.number("fuel_per_tonne", p.fuel_per_tonne);
    p.batt_cc_per_unit = n.number("batt_cc_per_unit", p.batt_cc_per_unit);
    p.batt_rc_per_unit = n.number("batt_rc_per_unit", p.batt_rc_per_unit);
    p.batt_om_per_unit_yr = n.number("batt_om_per_unit_yr", p.batt_om_per_unit_yr);
    p.conv_cc_per_kw = n.number("conv_cc_per_kw", p.conv_cc_per_kw);
    p.conv_rc_per_kw = n.number("conv_rc_per_kw", p.conv_rc_per_kw);
    p.conv_om_per_kw_yr = n.number("conv_om_per_kw_yr", p.conv_om_per_kw_yr);
    p.conv_life_yr = n.number("conv_life_yr", p.conv_life_yr);
    n.close();
    checked(n.path(), [&] { p.validate(); });
    return p;
}

void parse_traffic(Node& n, TrafficStream& t, std::optional<std::uint64_t> seed) {
    t.mu = n.number("mu", t.mu);
    t.ul_fraction = n.number("ul_fraction", t.ul_fraction);
    t.service = service_field(n);
    t.lognormal_sigma = n.number("lognormal_sigma", t.lognormal_sigma);
    if (n.has("seed")) {
        t.seed = static_cast<std::uint64_t>(n.integer("seed"));
    } else if (seed) {
        t.seed = *seed;
    } else {
        n.fail("seed", "a seed is required for stochastic runs (here or at top level)");
    }
}

std::vector<double> rates_field(Node& n, const std::string& key, double mu) {
    const auto v = n.numbers(key);
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!(v[k] >= 0.0 && v[k] < mu)) {
            throw ScenarioError(n.child(key) + "[" + std::to_string(k) + "]",
                                "arrival rate must lie in [0, mu)");
        }
    }
    return v;
}

NrtSweep parse_nrt(Node& n, std::optional<std::uint64_t> seed) {
    NrtSweep s;
    parse_traffic(n, s.traffic, seed);
    s.lambdas = rates_field(n, "lambdas", s.traffic.mu);
    if (n.has("n_short_cycles")) s.n_short_cycles = n.integers("n_short_cycles");
    s.compare_baseline = n.boolean("compare_baseline", s.compare_baseline);
    s.horizon_ms = n.number("horizon_ms", s.horizon_ms);
    DrxParams& p = s.params;
    p.tau_s = n.number("tau_s", p.tau_s);
    p.tau_l = n.number("tau_l", p.tau_l);
    p.tau_st = n.number("tau_st", p.tau_st);
    p.tau_i = n.number("tau_i", p.tau_i);
    p.drx_total = n.number("drx_total", p.drx_total);
    p.on_duration = n.number("on_duration", p.on_duration);
    p.p_data_mw = n.number("p_data_mw", p.p_data_mw);
    p.p_wait_mw = n.number("p_wait_mw", p.p_wait_mw);
    p.p_off_mw = n.number("p_off_mw", p.p_off_mw);
    n.close();
    if (!(s.horizon_ms > 0.0)) n.fail("horizon_ms", "must be positive");
    checked(n.path(), [&] {
        p.validate();
        for (int c : s.n_short_cycles) (void)p.with_short_cycles(c);
    });
    return s;
}

IotSweep parse_iot(Node& n, std::optional<std::uint64_t> seed) {
    IotSweep s;
    parse_traffic(n, s.traffic, seed);
    s.lambdas = rates_field(n, "lambdas", s.traffic.mu);
    s.t3324_s = n.has("t3324_s") ? n.numbers("t3324_s") : std::vector<double>{5, 15, 25, 35};
    s.horizon_ms = n.number("horizon_ms", s.horizon_ms);
    IotParams& p = s.params;
    p.edrx_window_s = n.number("edrx_window_s", p.edrx_window_s);
    p.t3412_s = n.number("t3412_s", p.t3412_s);
    p.tau_i = n.number("tau_i", p.tau_i);
    p.tau_s = n.number("tau_s", p.tau_s);
    p.n_short_cycles = static_cast<int>(n.integer("n_short_cycles", p.n_short_cycles));
    p.paging_ms = n.number("paging_ms", p.paging_ms);
    p.tau_update_ms = n.number("tau_update_ms", p.tau_update_ms);
    p.p_data_mw = n.number("p_data_mw", p.p_data_mw);
    p.p_inactive_mw = n.number("p_inactive_mw", p.p_inactive_mw);
    p.p_edrx_mw = n.number("p_edrx_mw", p.p_edrx_mw);
    p.p_psm_mw = n.number("p_psm_mw", p.p_psm_mw);
    p.battery_wh = n.number("battery_wh", p.battery_wh);
    n.close();
    if (!(s.horizon_ms > 0.0)) n.fail("horizon_ms", "must be positive");
    checked(n.path(), [&] {
        for (double t : s.t3324_s) {
            IotParams q = p;
            q.t3324_s = t;
            q.validate();
        }
    });
    return s;
}

RadioSweep parse_radio(Node& n, std::optional<std::uint64_t> seed) {
    RadioSweep s;
    RadioScenario& r = s.base;
    if (n.has("bandwidths_mhz")) {
        s.bandwidths_mhz = n.integers("bandwidths_mhz");
        for (int bw : s.bandwidths_mhz) {
            if (bw <= 0) n.fail("bandwidths_mhz", "bandwidths must be positive");
        }
    }
    r.drops = static_cast<int>(n.integer("drops", r.drops));
    if (n.has("seed")) {
        r.seed = static_cast<std::uint64_t>(n.integer("seed"));
    } else if (seed) {
        r.seed = *seed;
    } else {
        n.fail("seed", "a seed is required for stochastic runs (here or at top level)");
    }
    r.carrier_hz = n.number("carrier_hz", r.carrier_hz);
    r.rb_hz = n.number("rb_hz", r.rb_hz);
    r.alpha = n.number("alpha", r.alpha);
    r.shadow_sigma_db = n.number("shadow_sigma_db", r.shadow_sigma_db);
    r.macro_radius_m = n.number("macro_radius_m", r.macro_radius_m);
    r.pico_radius_m = n.number("pico_radius_m", r.pico_radius_m);
    r.macro_tx_w = n.number("macro_tx_w", r.macro_tx_w);
    r.pico_tx_w = n.number("pico_tx_w", r.pico_tx_w);
    r.n_picos = static_cast<int>(n.integer("n_picos", r.n_picos));
    r.pico_offset_frac = n.number("pico_offset_frac", r.pico_offset_frac);
    r.interferer_ring = n.boolean("interferer_ring", r.interferer_ring);
    r.users_macro = static_cast<int>(n.integer("users_macro", r.users_macro));
    r.users_per_pico = static_cast<int>(n.integer("users_per_pico", r.users_per_pico));
    s.write_drops = n.boolean("write_drops", s.write_drops);
    n.close();
    checked(n.path(), [&] {
        for (int bw : s.bandwidths_mhz) {
            RadioScenario q = r;
            q.bandwidth_hz = bw * 1e6;
            q.validate();
        }
    });
    return s;
}

SizingSpec parse_sizing(Node& n, const std::vector<SiteConfig>& sites) {
    SizingSpec s;
    if (n.has("sites")) {
        const json& v = n.raw("sites");
        if (!v.is_array()) n.fail("sites", "expected an array of site ids");
        for (const auto& id : v) {
            if (!id.is_string()) n.fail("sites", "expected an array of site ids");
            const auto name = id.get<std::string>();
            const bool known = std::any_of(sites.begin(), sites.end(), [&](const auto& x) { return x.id == name; });
            if (!known) n.fail("sites", "unknown site '" + name + "'");
            s.sites.push_back(name);
        }
    }
    if (n.has("pv_kw")) s.pv_kw = n.numbers("pv_kw");
    if (n.has("bg_kw")) s.bg_kw = n.numbers("bg_kw");
    if (n.has("batt_units")) s.batt_units = n.integers("batt_units");
    if (n.has("conv_kw")) s.conv_kw = n.numbers("conv_kw");
    s.rules.shortage_tolerance = n.number("shortage_tolerance", s.rules.shortage_tolerance);
    s.rules.backup_days = n.number("backup_days", s.rules.backup_days);
    s.threads = static_cast<unsigned>(n.integer("threads", 0));
    n.close();
    if (s.rules.shortage_tolerance < 0.0) n.fail("shortage_tolerance", "must be non-negative");
    if (s.rules.backup_days < 0.0) n.fail("backup_days", "must be non-negative");
    for (const auto& site : sites) {
        if (!s.sites.empty() && std::find(s.sites.begin(), s.sites.end(), site.id) == s.sites.end()) continue;
        SearchSpace space = s.space_for(site.kind);
        if (!has_biomass(site.kind)) space.bg_kw = {0.0};
        checked(n.path(), [&] { space.validate(site); });
    }
    return s;
}

}  // namespace

SearchSpace SizingSpec::space_for(BsKind kind) const {
    SearchSpace s = SearchSpace::default_for(kind);
    if (pv_kw) s.pv_kw = *pv_kw;
    if (bg_kw && has_biomass(kind)) s.bg_kw = *bg_kw;
    if (batt_units) s.batt_units = *batt_units;
    if (conv_kw) s.conv_kw = *conv_kw;
    return s;
}

EnergySystemDesign reference_design(BsKind kind, int bandwidth_mhz) {
    const bool wide = bandwidth_mhz >= 15;
    switch (kind) {
        case BsKind::Macro:
            return {bandwidth_mhz <= 5 ? 2.5 : (wide ? 4.0 : 3.5), 1.0, 32, 0.1};
        case BsKind::Micro: return {wide ? 1.0 : 0.5, 1.0, 24, 0.1};
        case BsKind::Pico:
        case BsKind::Femto: return {0.1, 0.0, 8, 0.0};
    }
    return {};
}

void apply_seed(Scenario& sc, std::uint64_t seed) {
    sc.seed = seed;
    if (sc.radio) sc.radio->base.seed = seed;
    if (sc.nrt) sc.nrt->traffic.seed = seed;
    if (sc.iot) sc.iot->traffic.seed = seed;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        throw ScenarioError("", "empty scenario; required fields: name, sites");
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError("", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("", "top level must be an object with fields: name, sites");

    Node root(doc, "");
    Scenario sc;
    sc.source_hash = fnv1a64(text);
    sc.name = root.text("name");
    if (root.has("seed")) {
        const auto s = root.integer("seed");
        if (s < 0) root.fail("seed", "must be non-negative");
        sc.seed = static_cast<std::uint64_t>(s);
    }
    sc.bandwidth_mhz = bandwidth_field(root, "bandwidth_mhz", 10);

    ProfileCache profiles{base_dir, {}};
    const std::string default_profile = root.text("solar_profile", "flat");

    auto site_nodes = root.objects("sites");
    if (site_nodes.empty()) root.fail("sites", "at least one site is required");
    for (auto& n : site_nodes) sc.sites.push_back(parse_site(n, sc.bandwidth_mhz, default_profile, profiles));

    if (root.has("links")) {
        for (auto& n : root.objects("links")) sc.links.push_back(parse_link(n));
        try {
            check_topology(sc.sites, sc.links);
        } catch (const TopologyError& e) {
            throw ScenarioError("links", e.what());
        }
    }

    if (root.has("sharing")) {
        Node n = root.object("sharing");
        const std::string mode = n.text("mode", "annual");
        if (mode == "annual") {
            sc.sharing.mode = SharingMode::Annual;
        } else if (mode == "hourly") {
            sc.sharing.mode = SharingMode::Hourly;
        } else {
            n.fail("mode", "expected annual or hourly");
        }
        sc.sharing.current_resolution_a = n.number("current_resolution_a", 0.0);
        sc.sharing.e_ref_factor = n.number("e_ref_factor", sc.sharing.e_ref_factor);
        sc.sharing.donor_soc_fraction = n.number("donor_soc_fraction", sc.sharing.donor_soc_fraction);
        sc.sharing.donor_reserve_frac = n.number("donor_reserve_frac", sc.sharing.donor_reserve_frac);
        n.close();
        if (sc.sharing.current_resolution_a < 0.0) n.fail("current_resolution_a", "must be non-negative");
        if (sc.sharing.e_ref_factor < 1.0) n.fail("e_ref_factor", "must be at least 1");
    }

    if (root.has("economics")) {
        Node n = root.object("economics");
        sc.econ.interest = n.number("interest", sc.econ.interest);
        sc.econ.project_years = static_cast<int>(n.integer("project_years", sc.econ.project_years));
        if (n.has("prices")) {
            Node p = n.object("prices");
            sc.econ.prices = parse_prices(p);
        }
        n.close();
        if (sc.econ.interest < 0.0) n.fail("interest", "must be non-negative");
        if (sc.econ.project_years < 1) n.fail("project_years", "must be at least 1");
    }

    if (root.has("emissions")) {
        Node n = root.object("emissions");
        sc.credit_avoided_burning = n.boolean("credit_avoided_burning", false);
        n.close();
    }

    if (root.has("sizing")) {
        Node n = root.object("sizing");
        sc.sizing = parse_sizing(n, sc.sites);
    }
    if (root.has("radio")) {
        Node n = root.object("radio");
        sc.radio = parse_radio(n, sc.seed);
    }
    if (root.has("sched")) {
        Node n = root.object("sched");
        if (n.has("nrt")) {
            Node m = n.object("nrt");
            sc.nrt = parse_nrt(m, sc.seed);
        }
        if (n.has("iot")) {
            Node m = n.object("iot");
            sc.iot = parse_iot(m, sc.seed);
        }
        n.close();
    }
    if (root.has("output_dir")) sc.output_dir = resolve(base_dir, root.text("output_dir"));
    root.close();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("", "cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    Scenario sc = parse_scenario(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
    sc.source = path;
    return sc;
}

}  // namespace greennet
