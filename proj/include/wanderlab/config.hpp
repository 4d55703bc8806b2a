#pragma once

// Line-oriented configuration: `[section]` headers and `key = value` pairs,
// full-line `#` comments, no inline comments or expressions. Parsing is
// strict in two stages: malformed lines fail immediately with their line
// number, and after the consumers have pulled their keys, finish() rejects
// anything left unread, so misspelled or misplaced keys never pass silently.

#include <cctype>
#include <climits>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wanderlab/blaschke.hpp"
#include "wanderlab/chain.hpp"
#include "wanderlab/classify.hpp"
#include "wanderlab/errors.hpp"
#include "wanderlab/surgery.hpp"

namespace wanderlab {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::islower(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

} // namespace detail

class Config {
public:
    static Config parse_string(const std::string& text, const std::string& origin = "<string>") {
        Config cfg;
        cfg.origin_ = origin;
        std::istringstream in(text);
        std::string line, section;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string t = detail::trim(line);
            if (t.empty() || t[0] == '#') continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw config_error(origin + ":" + std::to_string(line_no) +
                                       ": unterminated section header");
                section = detail::trim(t.substr(1, t.size() - 2));
                if (!detail::valid_identifier(section))
                    throw config_error(origin + ":" + std::to_string(line_no) +
                                       ": bad section name '" + section + "'");
                continue;
            }
            const std::size_t eq = t.find('=');
            if (eq == std::string::npos)
                throw config_error(origin + ":" + std::to_string(line_no) +
                                   ": expected 'key = value'");
            const std::string key = detail::trim(t.substr(0, eq));
            const std::string value = detail::trim(t.substr(eq + 1));
            if (!detail::valid_identifier(key))
                throw config_error(origin + ":" + std::to_string(line_no) + ": bad key '" +
                                   key + "'");
            if (section.empty())
                throw config_error(origin + ":" + std::to_string(line_no) + ": key '" + key +
                                   "' appears before any [section]");
            auto [it, inserted] = cfg.sections_[section].emplace(key, Entry{value, line_no, false});
            (void)it;
            if (!inserted)
                throw config_error(origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                                   section + "." + key + "'");
        }
        return cfg;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_string(buf.str(), path);
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        const Entry* e = find(section, key);
        return e ? e->value : fallback;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        return parse_double(*e, section, key);
    }

    int get_int(const std::string& section, const std::string& key, int fallback) const {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(e->value, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != e->value.size() || v < INT_MIN || v > INT_MAX)
            throw config_error(where(*e, section, key) + ": expected an integer, got '" +
                               e->value + "'");
        return int(v);
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
        if (e->value == "false" || e->value == "0" || e->value == "no") return false;
        throw config_error(where(*e, section, key) + ": expected a boolean, got '" + e->value +
                           "'");
    }

    // Comma-separated doubles; surrounding brackets are tolerated.
    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        std::vector<double> fallback) const {
        const Entry* e = find(section, key);
        if (!e) return fallback;
        std::string body = e->value;
        if (!body.empty() && body.front() == '[' && body.back() == ']')
            body = body.substr(1, body.size() - 2);
        std::vector<double> out;
        std::istringstream in(body);
        std::string item;
        while (std::getline(in, item, ',')) {
            const std::string t = detail::trim(item);
            if (t.empty())
                throw config_error(where(*e, section, key) + ": empty list element");
            Entry fake{t, e->line, true};
            out.push_back(parse_double(fake, section, key));
        }
        if (out.empty())
            throw config_error(where(*e, section, key) + ": empty list");
        return out;
    }

    // Rejects every key no consumer has read, naming key and line.
    void finish() const {
        std::vector<std::string> stale;
        for (const auto& [sec, keys] : sections_)
            for (const auto& [key, entry] : keys)
                if (!entry.consumed)
                    stale.push_back(origin_ + ":" + std::to_string(entry.line) +
                                    ": unknown key '" + sec + "." + key + "'");
        if (!stale.empty()) {
            std::string msg = "unrecognized configuration:";
            for (const std::string& s : stale) msg += "\n  " + s;
            throw config_error(msg);
        }
    }

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };

    const Entry* find(const std::string& section, const std::string& key) const {
        const auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        const auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.consumed = true;
        return &k->second;
    }

    std::string where(const Entry& e, const std::string& section, const std::string& key) const {
        return origin_ + ":" + std::to_string(e.line) + ": key '" + section + "." + key + "'";
    }

    double parse_double(const Entry& e, const std::string& section, const std::string& key) const {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(e.value, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != e.value.size())
            throw config_error(where(e, section, key) + ": expected a number, got '" + e.value +
                               "'");
        return v;
    }

    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::string origin_;
};

// ---------------------------------------------------------------------------
// Object factories. Each reads one or more sections; unread keys are caught
// later by Config::finish().

inline FactorSchedule make_factor_schedule(const Config& cfg,
                                           const std::string& section = "factor") {
    const std::string family = cfg.get_string(section, "family", "geometric");
    if (family == "harmonic") return FactorSchedule::harmonic();
    if (family == "geometric") return FactorSchedule::geometric(cfg.get_double(section, "q", 0.25));
    if (family == "constant")
        return FactorSchedule::constant(cfg.get_double(section, "value", 0.5));
    if (family == "trivial") return FactorSchedule::trivial();
    if (family == "list") {
        const std::vector<double> values = cfg.get_double_list(section, "values", {});
        double tail_q = 0.0;
        const std::string tail = cfg.get_string(section, "tail", "none");
        if (tail == "geometric") tail_q = cfg.get_double(section, "tail_q", 0.5);
        else if (tail != "none")
            throw config_error("[" + section + "] tail must be 'none' or 'geometric'");
        return FactorSchedule::list(values, tail_q);
    }
    throw config_error("[" + section + "] family must be one of "
                       "harmonic, geometric, constant, trivial, list");
}

inline ChainModel make_chain_model(const Config& cfg, std::uint64_t seed) {
    ChainModel model;
    model.schedule = make_factor_schedule(cfg);
    model.translation_step = cfg.get_double("chain", "translation_step", 4.0);
    model.isometric_from = cfg.get_int("chain", "isometric_from", -1);
    model.rotation_angle = cfg.get_double("chain", "rotation_angle", 0.5);
    if (!(model.translation_step >= 4.0))
        throw config_error("[chain] translation_step must be >= 4 to keep the discs disjoint");

    const std::string mode = cfg.get_string("radii", "mode", "schedule");
    if (mode == "schedule") {
        model.radii.mode = RadiiRule::Mode::schedule_tied;
    } else if (mode == "geometric") {
        model.radii.mode = RadiiRule::Mode::geometric;
        model.radii.inner_gap0 = cfg.get_double("radii", "inner_gap0", 0.25);
        model.radii.outer_gap0 = cfg.get_double("radii", "outer_gap0", 0.25);
        model.radii.ratio = cfg.get_double("radii", "ratio", 0.5);
        if (!(model.radii.inner_gap0 > 0.0 && model.radii.inner_gap0 < 1.0) ||
            !(model.radii.outer_gap0 > 0.0) ||
            !(model.radii.ratio > 0.0 && model.radii.ratio < 1.0))
            throw config_error("[radii] geometric mode needs inner_gap0 in (0,1), "
                               "outer_gap0 > 0, ratio in (0,1)");
    } else {
        throw config_error("[radii] mode must be 'schedule' or 'geometric'");
    }

    model.perturbation.enabled = cfg.get_bool("perturbation", "enabled", false);
    model.perturbation.scale = cfg.get_double("perturbation", "scale", 0.125);
    model.perturbation.ratio = cfg.get_double("perturbation", "ratio", 0.25);
    model.perturbation.degree = cfg.get_int("perturbation", "degree", 3);
    model.perturbation.seed = seed;
    if (model.perturbation.enabled) {
        if (!(model.perturbation.scale > 0.0 && model.perturbation.scale <= 0.25))
            throw config_error("[perturbation] scale must lie in (0, 0.25] so budgets stay "
                               "below a quarter of the disc margin");
        if (!(model.perturbation.ratio > 0.0 && model.perturbation.ratio < 1.0))
            throw config_error("[perturbation] ratio must lie in (0,1)");
        if (model.perturbation.degree < 1 || model.perturbation.degree > 16)
            throw config_error("[perturbation] degree must lie in [1,16]");
    }
    return model;
}

inline SurgerySchedule make_surgery_schedule(const Config& cfg) {
    SurgerySchedule s;
    s.factors = make_factor_schedule(cfg);

    const std::string mu_family = cfg.get_string("mu", "family", "geometric");
    if (mu_family == "geometric") {
        s.mu.kind = MuRule::Kind::geometric;
        s.mu.base = cfg.get_double("mu", "base", 10.0);
        s.mu.growth = cfg.get_double("mu", "growth", 2.0);
        s.mu.cap = cfg.get_double("mu", "cap", 1e12);
        if (!(s.mu.base > 0.0 && s.mu.growth >= 1.0 && s.mu.cap >= s.mu.base))
            throw config_error("[mu] geometric rule needs base > 0, growth >= 1, cap >= base");
    } else if (mu_family == "constant") {
        s.mu.kind = MuRule::Kind::constant;
        s.mu.value = cfg.get_double("mu", "value", 320.0);
        if (!(s.mu.value > 0.0)) throw config_error("[mu] constant value must be positive");
    } else {
        throw config_error("[mu] family must be 'geometric' or 'constant'");
    }

    s.eps.scale = cfg.get_double("epsilon", "scale", 0.125);
    s.eps.ratio = cfg.get_double("epsilon", "ratio", 0.25);
    s.r = cfg.get_double("surgery", "r", 0.1);
    s.r_prime = cfg.get_double("surgery", "r_prime", 0.2);
    s.eta = cfg.get_double("surgery", "eta", 0.0);
    s.start_index = cfg.get_int("surgery", "n", 5);
    s.validate();
    return s;
}

inline ClassifyParams make_classify_params(const Config& cfg) {
    ClassifyParams p;
    p.eps_contract = cfg.get_double("classify", "eps_contract", 1e-6);
    p.eps_flat = cfg.get_double("classify", "eps_flat", 1e-12);
    p.window = cfg.get_int("classify", "window", 50);
    p.jump_factor = cfg.get_double("classify", "jump_factor", 100.0);
    return p;
}

} // namespace wanderlab
