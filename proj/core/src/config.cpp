#include "tsadam/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tsadam/csvio.hpp"
#include "tsadam/errors.hpp"

namespace tsadam::config {

namespace {

const std::map<std::string, std::vector<std::string>> kValidKeys = {
    {"experiment",
     {"data", "lookback", "horizon", "model", "hidden", "batch", "epochs", "patience",
      "ratios", "seeds", "optimizers", "lr_schedule", "noise", "noise_level",
      "outlier_fraction", "outlier_magnitude", "mase_seasonality", "init_scale",
      "noise_seed"}},
    {"series",
     {"trend_start", "sigma_eps", "sigma_r", "period", "seasonal", "length", "seed"}},
    {"optimizer",
     {"alpha", "beta1", "beta2", "epsilon", "weight_decay", "lookahead_k",
      "lookahead_alpha", "inner"}},
};

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ", ";
        out += items[i];
    }
    return out;
}

void check_section_keys(const std::string& section, const Section& entries) {
    const auto it = kValidKeys.find(section);
    if (it == kValidKeys.end()) {
        throw ConfigError("unknown section [" + section +
                          "] (valid: experiment, series, optimizer)");
    }
    for (const auto& [key, value] : entries) {
        const std::vector<std::string>& valid = it->second;
        if (std::find(valid.begin(), valid.end(), key) == valid.end()) {
            throw ConfigError("unknown key '" + key + "' in [" + section +
                              "] (valid: " + join(valid) + ")");
        }
    }
}

void check_keys(const Document& doc) {
    for (const auto& [section, entries] : doc) check_section_keys(section, entries);
}

// Section readers validate the keys of the section they consume so they
// reject typos even when called outside train_setup.
void check_section(const Document& doc, const std::string& section) {
    const auto sec = doc.find(section);
    if (sec != doc.end()) check_section_keys(section, sec->second);
}

const std::string* find(const Document& doc, const std::string& section,
                        const std::string& key) {
    const auto sec = doc.find(section);
    if (sec == doc.end()) return nullptr;
    const auto entry = sec->second.find(key);
    if (entry == sec->second.end()) return nullptr;
    return &entry->second;
}

double number_value(const std::string& section, const std::string& key,
                    const std::string& text) {
    try {
        return csv::parse_double(text, "[" + section + "] " + key, 0);
    } catch (const ParseError&) {
        throw ConfigError("key '" + key + "' in [" + section +
                          "]: cannot parse number '" + text + "'");
    }
}

double get_double(const Document& doc, const std::string& section,
                  const std::string& key, double fallback) {
    const std::string* v = find(doc, section, key);
    return v ? number_value(section, key, *v) : fallback;
}

long long get_int(const Document& doc, const std::string& section,
                  const std::string& key, long long fallback) {
    const std::string* v = find(doc, section, key);
    if (!v) return fallback;
    const double d = number_value(section, key, *v);
    const long long i = std::llround(d);
    if (static_cast<double>(i) != d) {
        throw ConfigError("key '" + key + "' in [" + section +
                          "]: expected an integer, got '" + *v + "'");
    }
    return i;
}

std::string get_string(const Document& doc, const std::string& section,
                       const std::string& key, const std::string& fallback) {
    const std::string* v = find(doc, section, key);
    return v ? *v : fallback;
}

std::vector<double> parse_number_list(const std::string& section,
                                      const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const std::string& cell : csv::split(text, ',')) {
        out.push_back(number_value(section, key, cell));
    }
    return out;
}

std::vector<double> seasonal_pattern(const std::string& text, int period) {
    if (text.rfind("sine:", 0) == 0) {
        const double amp = number_value("series", "seasonal", text.substr(5));
        std::vector<double> pattern(period);
        const double pi = 3.141592653589793238462643383279502884;
        for (int k = 0; k < period; ++k) {
            pattern[k] = amp * std::sin(2.0 * pi * static_cast<double>(k) /
                                        static_cast<double>(period));
        }
        // A whole number of sine cycles sums to zero only up to rounding;
        // recenter so the zero-sum invariant holds exactly.
        double mean = 0.0;
        for (double s : pattern) mean += s;
        mean /= static_cast<double>(period);
        for (double& s : pattern) s -= mean;
        return pattern;
    }
    return parse_number_list("series", "seasonal", text);
}

}  // namespace

Document parse_string(const std::string& text, const std::string& source) {
    Document doc;
    std::istringstream in(text);
    std::string line;
    std::string section;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view t = csv::trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw ParseError(source + " line " + std::to_string(lineno) +
                                 ": malformed section header '" + std::string(t) + "'");
            }
            section = std::string(csv::trim(t.substr(1, t.size() - 2)));
            doc[section];
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(source + " line " + std::to_string(lineno) +
                             ": expected 'key = value', got '" + std::string(t) + "'");
        }
        if (section.empty()) {
            throw ParseError(source + " line " + std::to_string(lineno) +
                             ": key outside any [section]");
        }
        const std::string key(csv::trim(t.substr(0, eq)));
        const std::string value(csv::trim(t.substr(eq + 1)));
        if (key.empty()) {
            throw ParseError(source + " line " + std::to_string(lineno) + ": empty key");
        }
        doc[section][key] = value;
    }
    return doc;
}

Document parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    for (const std::string& cell : csv::split(text, ',')) {
        const double d = number_value("experiment", "seeds", cell);
        if (d < 0 || std::llround(d) != d) {
            throw ConfigError("seed list entries must be nonnegative integers, got '" +
                              cell + "'");
        }
        seeds.push_back(static_cast<std::uint64_t>(std::llround(d)));
    }
    if (seeds.empty()) throw ConfigError("seed list must be nonempty");
    return seeds;
}

synth::SeriesSpec series_spec(const Document& doc) {
    check_section(doc, "series");
    synth::SeriesSpec spec;
    spec.trend_start = get_double(doc, "series", "trend_start", 0.0);
    spec.sigma_eps = get_double(doc, "series", "sigma_eps", 0.0);
    spec.sigma_r = get_double(doc, "series", "sigma_r", 0.0);
    spec.period = static_cast<int>(get_int(doc, "series", "period", 1));
    spec.length = static_cast<long>(get_int(doc, "series", "length", 1));
    spec.seed = static_cast<std::uint64_t>(get_int(doc, "series", "seed", 0));
    if (spec.period < 1) throw ConfigError("key 'period' in [series]: must be >= 1");
    const std::string* seasonal = find(doc, "series", "seasonal");
    spec.seasonal = seasonal ? seasonal_pattern(*seasonal, spec.period)
                             : std::vector<double>(spec.period, 0.0);
    return spec;
}

optim::OptimizerSpec optimizer_spec_for(const std::string& name, const Document& doc) {
    check_section(doc, "optimizer");
    std::string base = name;
    bool dagger = false;
    const std::string suffix = "_dagger";
    if (base.size() > suffix.size() &&
        base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
        dagger = true;
        base = base.substr(0, base.size() - suffix.size());
    }
    const std::optional<optim::Family> family = optim::family_from_name(base);
    if (!family) {
        throw ConfigError("unknown optimizer '" + name +
                          "' (valid: sgd, adam, tsadam, adamw, yogi, lookahead, "
                          "plus a _dagger suffix for the corrected-off variants)");
    }
    optim::OptimizerSpec spec = optim::default_spec(*family);
    spec.alpha = get_double(doc, "optimizer", "alpha", spec.alpha);
    spec.beta1 = get_double(doc, "optimizer", "beta1", spec.beta1);
    spec.beta2 = get_double(doc, "optimizer", "beta2", spec.beta2);
    spec.epsilon = get_double(doc, "optimizer", "epsilon", spec.epsilon);
    spec.weight_decay = get_double(doc, "optimizer", "weight_decay", spec.weight_decay);
    spec.lookahead_k = static_cast<int>(get_int(doc, "optimizer", "lookahead_k",
                                                spec.lookahead_k));
    spec.lookahead_alpha = get_double(doc, "optimizer", "lookahead_alpha",
                                      spec.lookahead_alpha);
    if (*family == optim::Family::Lookahead) {
        const std::string inner = get_string(doc, "optimizer", "inner", "adam");
        const std::optional<optim::Family> inner_family = optim::family_from_name(inner);
        if (!inner_family || *inner_family == optim::Family::Lookahead) {
            throw ConfigError("key 'inner' in [optimizer]: invalid inner optimizer '" +
                              inner + "'");
        }
        spec.inner_family = *inner_family;
        spec.second_order_correction = *inner_family != optim::Family::TSAdam;
    }
    if (dagger) {
        if (*family == optim::Family::SGD) {
            throw ConfigError("optimizer 'sgd_dagger' is invalid: sgd has no "
                              "second-moment correction to drop");
        }
        spec = optim::make_dagger(spec);
    }
    optim::validate(spec);
    return spec;
}

TrainSetup train_setup(const Document& doc) {
    check_keys(doc);
    TrainSetup setup;
    train::ExperimentConfig& cfg = setup.base;

    const std::string data = get_string(doc, "experiment", "data", "synthetic");
    if (data != "synthetic" && !data.empty()) cfg.csv_path = data;
    cfg.series = series_spec(doc);
    cfg.lookback = static_cast<int>(get_int(doc, "experiment", "lookback", cfg.lookback));
    cfg.horizon = static_cast<int>(get_int(doc, "experiment", "horizon", cfg.horizon));
    cfg.model = get_string(doc, "experiment", "model", cfg.model);
    cfg.hidden = static_cast<int>(get_int(doc, "experiment", "hidden", cfg.hidden));
    cfg.batch_size = static_cast<int>(get_int(doc, "experiment", "batch", cfg.batch_size));
    cfg.epochs = static_cast<int>(get_int(doc, "experiment", "epochs", cfg.epochs));
    cfg.patience = static_cast<int>(get_int(doc, "experiment", "patience", cfg.patience));
    cfg.mase_seasonality = static_cast<int>(
        get_int(doc, "experiment", "mase_seasonality", cfg.mase_seasonality));
    cfg.init_scale = get_double(doc, "experiment", "init_scale", cfg.init_scale);
    cfg.noise_seed = static_cast<std::uint64_t>(
        get_int(doc, "experiment", "noise_seed", static_cast<long long>(cfg.noise_seed)));

    if (const std::string* ratios = find(doc, "experiment", "ratios")) {
        const std::vector<double> r = parse_number_list("experiment", "ratios", *ratios);
        if (r.size() != 3) {
            throw ConfigError("key 'ratios' in [experiment]: expected three values");
        }
        cfg.ratios = {r[0], r[1], r[2]};
    }
    if (const std::string* seeds = find(doc, "experiment", "seeds")) {
        cfg.seeds = parse_seed_list(*seeds);
    }
    cfg.lr_schedule = train::lr_schedule_from_name(
        get_string(doc, "experiment", "lr_schedule", "none"));
    cfg.noise = train::noise_kind_from_name(get_string(doc, "experiment", "noise", "none"));
    cfg.noise_params.gaussian_fraction =
        get_double(doc, "experiment", "noise_level", cfg.noise_params.gaussian_fraction);
    cfg.noise_params.outlier_fraction = get_double(
        doc, "experiment", "outlier_fraction", cfg.noise_params.outlier_fraction);
    cfg.noise_params.outlier_magnitude = get_double(
        doc, "experiment", "outlier_magnitude", cfg.noise_params.outlier_magnitude);

    const std::string optimizers =
        get_string(doc, "experiment", "optimizers", "tsadam,adam");
    for (const std::string& cell : csv::split(optimizers, ',')) {
        const std::string name(csv::trim(cell));
        if (name.empty()) continue;
        setup.optimizer_names.push_back(name);
        setup.optimizers.push_back(optimizer_spec_for(name, doc));
    }
    if (setup.optimizers.empty()) {
        throw ConfigError("key 'optimizers' in [experiment]: list must be nonempty");
    }
    cfg.optimizer = setup.optimizers.front();
    return setup;
}

}  // namespace tsadam::config
