#include "qcast/config.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "qcast/csv.hpp"
#include "qcast/errors.hpp"

namespace qcast {

namespace {

std::string trimmed(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
    bool used = false;
};

/// One parsed [section] with its key-value entries in file order.
struct Section {
    std::string kind;   // "", "transform", or "model"
    std::string name;   // section argument
    std::size_t line = 0;
    std::vector<Entry> entries;

    Entry* find(const std::string& key) {
        for (auto& e : entries) {
            if (e.key == key) return &e;
        }
        return nullptr;
    }
};

struct ParsedFile {
    std::string origin;
    std::vector<Section> sections;  // sections[0] is the unnamed top level

    [[noreturn]] void fail(std::size_t line, const std::string& message) const {
        throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
    }
};

ParsedFile read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path.string() + "'");
    }
    ParsedFile file;
    file.origin = path.string();
    file.sections.push_back(Section{});

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string text = trimmed(line);
        if (text.empty()) {
            continue;
        }
        if (text.front() == '[') {
            if (text.back() != ']') {
                file.fail(line_no, "unterminated section header");
            }
            const std::string inner = trimmed(text.substr(1, text.size() - 2));
            const std::size_t space = inner.find(' ');
            Section section;
            section.line = line_no;
            if (space == std::string::npos) {
                file.fail(line_no, "section header needs a kind and a name, e.g. [model ridge]");
            }
            section.kind = trimmed(inner.substr(0, space));
            section.name = trimmed(inner.substr(space + 1));
            if (section.kind != "transform" && section.kind != "model") {
                file.fail(line_no, "unknown section kind '" + section.kind + "'");
            }
            if (section.name.empty()) {
                file.fail(line_no, "section needs a name");
            }
            file.sections.push_back(std::move(section));
            continue;
        }
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) {
            file.fail(line_no, "expected key = value");
        }
        Entry entry;
        entry.key = trimmed(text.substr(0, eq));
        entry.value = trimmed(text.substr(eq + 1));
        entry.line = line_no;
        if (entry.key.empty()) {
            file.fail(line_no, "empty key");
        }
        Section& current = file.sections.back();
        if (current.find(entry.key)) {
            file.fail(line_no, "duplicate key '" + entry.key + "'");
        }
        current.entries.push_back(std::move(entry));
    }
    return file;
}

double parse_number(const ParsedFile& file, const Entry& entry) {
    const char* begin = entry.value.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (entry.value.empty() || end != begin + entry.value.size()) {
        file.fail(entry.line, "key '" + entry.key + "': cannot parse number '" + entry.value + "'");
    }
    return value;
}

long parse_integer(const ParsedFile& file, const Entry& entry) {
    const char* begin = entry.value.c_str();
    char* end = nullptr;
    const long value = std::strtol(begin, &end, 10);
    if (entry.value.empty() || end != begin + entry.value.size()) {
        file.fail(entry.line, "key '" + entry.key + "': cannot parse integer '" + entry.value + "'");
    }
    return value;
}

bool parse_flag(const ParsedFile& file, const Entry& entry) {
    if (entry.value == "true" || entry.value == "1" || entry.value == "yes") return true;
    if (entry.value == "false" || entry.value == "0" || entry.value == "no") return false;
    file.fail(entry.line, "key '" + entry.key + "': expected true/false, got '" + entry.value + "'");
}

std::vector<std::string> parse_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        const std::string t = trimmed(item);
        if (!t.empty()) {
            items.push_back(t);
        }
    }
    return items;
}

void reject_unused(const ParsedFile& file) {
    for (const auto& section : file.sections) {
        for (const auto& entry : section.entries) {
            if (!entry.used) {
                file.fail(entry.line, "unknown key '" + entry.key + "'");
            }
        }
    }
}

Entry* take(Section& section, const std::string& key) {
    Entry* e = section.find(key);
    if (e) {
        e->used = true;
    }
    return e;
}

Entry& require(const ParsedFile& file, Section& section, const std::string& key) {
    Entry* e = take(section, key);
    if (!e) {
        const std::string where =
            section.kind.empty() ? "config" : "[" + section.kind + " " + section.name + "]";
        file.fail(section.line == 0 ? 1 : section.line, where + " is missing key '" + key + "'");
    }
    return *e;
}

TransformSpec parse_transform_section(const ParsedFile& file, Section& section) {
    TransformSpec spec;
    Entry& kind = require(file, section, "kind");
    try {
        spec.kind = transform_kind_from_string(kind.value);
    } catch (const ConfigError& e) {
        file.fail(kind.line, e.what());
    }
    if (Entry* offset = take(section, "offset")) {
        if (spec.kind != TransformKind::LevelOffset) {
            file.fail(offset->line, "offset only applies to level_offset transforms");
        }
        spec.offset = parse_number(file, *offset);
    } else if (spec.kind == TransformKind::LevelOffset) {
        file.fail(section.line, "level_offset transform needs an offset");
    }
    if (Entry* diff = take(section, "diff")) {
        spec.difference = parse_flag(file, *diff);
    }
    return spec;
}

ModelKind model_kind_from_string(const ParsedFile& file, const Entry& entry) {
    const std::string& name = entry.value;
    if (name == "ols") return ModelKind::Ols;
    if (name == "ridge") return ModelKind::Ridge;
    if (name == "lasso") return ModelKind::Lasso;
    if (name == "elastic_net") return ModelKind::ElasticNet;
    if (name == "pls") return ModelKind::Pls;
    if (name == "ar1") return ModelKind::Ar1;
    file.fail(entry.line, "unknown model type '" + name +
                              "'; expected ar1, ols, ridge, lasso, elastic_net, pls, or "
                              "median_ensemble");
}

void parse_model_section(const ParsedFile& file, Section& section, RunConfig& config) {
    Entry& type = require(file, section, "type");
    if (type.value == "median_ensemble") {
        EnsembleConfig ensemble;
        ensemble.name = section.name;
        Entry& members = require(file, section, "members");
        ensemble.members = parse_list(members.value);
        if (ensemble.members.empty()) {
            file.fail(members.line, "ensemble needs at least one member");
        }
        config.ensembles.push_back(std::move(ensemble));
        return;
    }

    ModelConfig model;
    model.name = section.name;
    model.kind = model_kind_from_string(file, type);

    const bool penalised = model.kind == ModelKind::Ridge || model.kind == ModelKind::Lasso ||
                           model.kind == ModelKind::ElasticNet;

    if (Entry* alpha = take(section, "alpha")) {
        if (model.kind != ModelKind::ElasticNet) {
            file.fail(alpha->line,
                      "alpha is only configurable for elastic_net (ridge is alpha = 1, lasso "
                      "alpha = 0)");
        }
        model.alpha = parse_number(file, *alpha);
        if (!(model.alpha >= 0.0 && model.alpha <= 1.0)) {
            file.fail(alpha->line, "alpha must lie in [0, 1]");
        }
    } else if (model.kind == ModelKind::ElasticNet) {
        file.fail(section.line, "elastic_net needs an alpha in [0, 1] (1 = ridge, 0 = lasso)");
    }
    if (model.kind == ModelKind::Ridge) model.alpha = 1.0;
    if (model.kind == ModelKind::Lasso) model.alpha = 0.0;

    if (Entry* lambda = take(section, "lambda")) {
        if (!penalised) {
            file.fail(lambda->line, "lambda only applies to penalised models");
        }
        const double value = parse_number(file, *lambda);
        if (!(value >= 0.0)) {
            file.fail(lambda->line, "lambda must be >= 0");
        }
        model.fixed_lambda = value;
    }
    if (Entry* rule = take(section, "lambda_rule")) {
        if (!penalised) {
            file.fail(rule->line, "lambda_rule only applies to penalised models");
        }
        if (model.fixed_lambda) {
            file.fail(rule->line, "lambda_rule contradicts the fixed lambda above");
        }
        try {
            model.rule = lambda_rule_from_string(rule->value);
        } catch (const ConfigError& e) {
            file.fail(rule->line, e.what());
        }
    }
    if (Entry* folds = take(section, "inner_folds")) {
        if (!penalised) {
            file.fail(folds->line, "inner_folds only applies to penalised models");
        }
        const long value = parse_integer(file, *folds);
        if (value < 2) {
            file.fail(folds->line, "inner_folds must be at least 2");
        }
        model.tuning.inner_folds = static_cast<std::size_t>(value);
    }
    if (Entry* count = take(section, "grid_count")) {
        if (!penalised) {
            file.fail(count->line, "grid_count only applies to penalised models");
        }
        const long value = parse_integer(file, *count);
        if (value < 2) {
            file.fail(count->line, "grid_count must be at least 2");
        }
        model.tuning.grid_count = static_cast<std::size_t>(value);
    }
    if (Entry* ratio = take(section, "grid_ratio")) {
        if (!penalised) {
            file.fail(ratio->line, "grid_ratio only applies to penalised models");
        }
        model.tuning.grid_ratio = parse_number(file, *ratio);
        if (!(model.tuning.grid_ratio > 0.0 && model.tuning.grid_ratio < 1.0)) {
            file.fail(ratio->line, "grid_ratio must lie in (0, 1)");
        }
    }
    if (Entry* metric = take(section, "inner_metric")) {
        if (!penalised) {
            file.fail(metric->line, "inner_metric only applies to penalised models");
        }
        if (metric->value == "mae") {
            model.tuning.metric = InnerMetric::Mae;
        } else if (metric->value == "rmse") {
            model.tuning.metric = InnerMetric::Rmse;
        } else {
            file.fail(metric->line, "inner_metric must be mae or rmse");
        }
    }
    if (Entry* retune = take(section, "retune")) {
        if (!penalised) {
            file.fail(retune->line, "retune only applies to penalised models");
        }
        model.retune_each_fold = parse_flag(file, *retune);
    }
    if (Entry* directions = take(section, "directions")) {
        if (model.kind != ModelKind::Pls) {
            file.fail(directions->line, "directions only applies to pls models");
        }
        const long value = parse_integer(file, *directions);
        if (value < 1) {
            file.fail(directions->line, "directions must be at least 1");
        }
        model.pls_directions = static_cast<std::size_t>(value);
    }

    config.models.push_back(std::move(model));
}

}  // namespace

RunConfig parse_run_config(const std::filesystem::path& path) {
    ParsedFile file = read_config_file(path);
    const std::filesystem::path base = path.parent_path();

    RunConfig config;
    Section& top = file.sections.front();

    Entry& dataset = require(file, top, "dataset");
    std::filesystem::path dataset_path = dataset.value;
    config.dataset = dataset_path.is_absolute() ? dataset_path : base / dataset_path;

    config.response = require(file, top, "response").value;

    Entry& folds = require(file, top, "folds");
    const long fold_count = parse_integer(file, folds);
    if (fold_count < 2) {
        file.fail(folds.line, "folds must be at least 2");
    }
    config.folds = static_cast<std::size_t>(fold_count);

    if (Entry* split = take(top, "split_at")) {
        Period p;
        if (!Period::try_parse(split->value, p)) {
            file.fail(split->line, "cannot parse split_at period '" + split->value + "'");
        }
        config.split_at = p;
    }
    if (Entry* window = take(top, "hampel_window")) {
        const long value = parse_integer(file, *window);
        if (value < 3 || value % 2 == 0) {
            file.fail(window->line, "hampel_window must be odd and >= 3");
        }
        config.hampel.window = static_cast<std::size_t>(value);
    }
    if (Entry* nmad = take(top, "hampel_nmad")) {
        config.hampel.n_mad = parse_number(file, *nmad);
        if (!(config.hampel.n_mad > 0.0)) {
            file.fail(nmad->line, "hampel_nmad must be positive");
        }
    }
    if (Entry* out = take(top, "output_dir")) {
        config.output_dir = out->value;
    }
    if (Entry* threads = take(top, "threads")) {
        const long value = parse_integer(file, *threads);
        if (value < 1) {
            file.fail(threads->line, "threads must be at least 1");
        }
        config.threads = static_cast<unsigned>(value);
    }

    std::set<std::string> model_names;
    for (std::size_t s = 1; s < file.sections.size(); ++s) {
        Section& section = file.sections[s];
        if (section.kind == "transform") {
            if (config.transforms.contains(section.name)) {
                file.fail(section.line, "duplicate transform for series '" + section.name + "'");
            }
            config.transforms[section.name] = parse_transform_section(file, section);
        } else {
            if (!model_names.insert(section.name).second) {
                file.fail(section.line, "duplicate model name '" + section.name + "'");
            }
            parse_model_section(file, section, config);
        }
    }
    reject_unused(file);

    if (!config.transforms.contains(config.response)) {
        throw ConfigError(file.origin + ": no transform configured for response '" +
                          config.response + "'");
    }
    if (config.models.empty()) {
        throw ConfigError(file.origin + ": no models configured");
    }
    for (const auto& ensemble : config.ensembles) {
        for (const auto& member : ensemble.members) {
            bool found = false;
            for (const auto& model : config.models) {
                if (model.name == member) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw ConfigError(file.origin + ": ensemble '" + ensemble.name +
                                  "' references unknown model '" + member + "'");
            }
        }
    }
    return config;
}

ScenarioRun parse_scenario_config(const std::filesystem::path& path) {
    ParsedFile file = read_config_file(path);
    if (file.sections.size() > 1) {
        file.fail(file.sections[1].line, "scenario configs have no sections");
    }
    Section& top = file.sections.front();

    ScenarioRun run;
    Entry& n = require(file, top, "n");
    const long n_value = parse_integer(file, n);
    if (n_value < 1) {
        file.fail(n.line, "n must be >= 1");
    }
    run.spec.n = static_cast<std::size_t>(n_value);

    Entry& q = require(file, top, "q");
    const long q_value = parse_integer(file, q);
    if (q_value < 0) {
        file.fail(q.line, "q must be >= 0");
    }
    run.spec.q = static_cast<std::size_t>(q_value);

    if (Entry* seed = take(top, "seed")) {
        const char* begin = seed->value.c_str();
        char* end = nullptr;
        const unsigned long long value = std::strtoull(begin, &end, 10);
        if (seed->value.empty() || end != begin + seed->value.size()) {
            file.fail(seed->line, "cannot parse seed '" + seed->value + "'");
        }
        run.spec.seed = value;
    }
    if (Entry* noise = take(top, "noise_sd")) {
        run.spec.noise_sd = parse_number(file, *noise);
    }
    if (Entry* idio = take(top, "idiosyncratic_sd")) {
        run.spec.idiosyncratic_sd = parse_number(file, *idio);
    }
    if (Entry* loadings = take(top, "loadings")) {
        const std::vector<std::string> items = parse_list(loadings->value);
        Vector values;
        for (const auto& item : items) {
            const char* begin = item.c_str();
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end != begin + item.size()) {
                file.fail(loadings->line, "cannot parse loading '" + item + "'");
            }
            values.push_back(v);
        }
        if (values.size() == 1) {
            values.assign(run.spec.q, values.front());  // single value replicates
        }
        run.spec.loadings = std::move(values);
    }
    if (Entry* kind = take(top, "break_kind")) {
        try {
            run.spec.break_kind = break_kind_from_string(kind->value);
        } catch (const ConfigError& e) {
            file.fail(kind->line, e.what());
        }
    }
    if (Entry* at = take(top, "break_at")) {
        const long value = parse_integer(file, *at);
        if (value < 1) {
            file.fail(at->line, "break_at is 1-based and must be >= 1");
        }
        run.spec.break_at = static_cast<std::size_t>(value);
    }
    if (Entry* shock = take(top, "shock_size")) {
        run.spec.shock_size = parse_number(file, *shock);
    }
    if (Entry* start = take(top, "start")) {
        Period p;
        if (!Period::try_parse(start->value, p)) {
            file.fail(start->line, "cannot parse start period '" + start->value + "'");
        }
        run.spec.start = p;
    }
    if (Entry* response = take(top, "response")) {
        run.spec.response_name = response->value;
    }

    Entry& output = require(file, top, "output");
    std::filesystem::path out_path = output.value;
    run.output = out_path;  // outputs resolve against the working directory

    reject_unused(file);
    return run;
}

std::string config_digest(const RunConfig& config) {
    // Canonical dump of the run semantics, hashed with 64-bit FNV-1a.
    std::ostringstream text;
    text << "dataset=" << config.dataset.string() << ";response=" << config.response
         << ";folds=" << config.folds << ";hampel=" << config.hampel.window << ','
         << format_double(config.hampel.n_mad);
    if (config.split_at) {
        text << ";split=" << config.split_at->str();
    }
    for (const auto& [name, spec] : config.transforms) {
        text << ";transform " << name << '=' << to_string(spec.kind) << ','
             << format_double(spec.offset) << ',' << (spec.difference ? 1 : 0);
    }
    for (const auto& model : config.models) {
        text << ";model " << model.name << '=' << to_string(model.kind) << ",alpha="
             << format_double(model.alpha);
        if (model.fixed_lambda) {
            text << ",lambda=" << format_double(*model.fixed_lambda);
        } else {
            text << ",rule=" << to_string(model.rule) << ",folds=" << model.tuning.inner_folds
                 << ",grid=" << model.tuning.grid_count << ','
                 << format_double(model.tuning.grid_ratio)
                 << ",metric=" << (model.tuning.metric == InnerMetric::Mae ? "mae" : "rmse")
                 << ",retune=" << (model.retune_each_fold ? 1 : 0);
        }
        if (model.kind == ModelKind::Pls) {
            text << ",directions=" << model.pls_directions;
        }
    }
    for (const auto& ensemble : config.ensembles) {
        text << ";ensemble " << ensemble.name << '=';
        for (std::size_t i = 0; i < ensemble.members.size(); ++i) {
            if (i) text << ',';
            text << ensemble.members[i];
        }
    }

    const std::string dump = text.str();
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char ch : dump) {
        hash ^= ch;
        hash *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace qcast
