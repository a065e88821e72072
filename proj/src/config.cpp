#include "shelab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <type_traits>

#include <fmt/format.h>

#include "shelab/errors.hpp"

namespace shelab {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return std::string(s);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    text = trim(text);
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError(fmt::format("{}: cannot parse '{}'", key, text));
    }
    return value;
}

std::vector<std::string_view> split_list(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw ConfigError(fmt::format("{}: expected a list like [a, b]", key));
    }
    text = trim(text.substr(1, text.size() - 2));
    std::vector<std::string_view> items;
    if (text.empty()) return items;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        items.push_back(trim(text.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return items;
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

template <class T>
std::string fmt_list(const std::vector<T>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        if constexpr (std::is_floating_point_v<T>) {
            s += fmt_double(v[i]);
        } else {
            s += std::to_string(v[i]);
        }
    }
    return s + "]";
}

struct Field {
    std::string key;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <class T>
Field field(std::string key, T RunConfig::*member) {
    Field f;
    f.key = key;
    f.set = [key, member](RunConfig& c, std::string_view text) {
        if constexpr (std::is_same_v<T, double>) {
            c.*member = parse_number<double>(key, text);
        } else if constexpr (std::is_same_v<T, bool>) {
            const auto v = unquote(text);
            if (v == "true") {
                c.*member = true;
            } else if (v == "false") {
                c.*member = false;
            } else {
                throw ConfigError(fmt::format("{}: expected true or false", key));
            }
        } else if constexpr (std::is_integral_v<T>) {
            c.*member = parse_number<T>(key, text);
        } else if constexpr (std::is_same_v<T, std::string>) {
            c.*member = unquote(text);
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
            const auto v = trim(text);
            if (v == "none") {
                c.*member = std::nullopt;
            } else {
                c.*member = parse_number<double>(key, v);
            }
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            std::vector<double> out;
            for (auto item : split_list(key, text)) out.push_back(parse_number<double>(key, item));
            c.*member = std::move(out);
        } else if constexpr (std::is_same_v<T, std::vector<long>>) {
            std::vector<long> out;
            for (auto item : split_list(key, text)) out.push_back(parse_number<long>(key, item));
            c.*member = std::move(out);
        } else if constexpr (std::is_same_v<T, SigmaKind>) {
            try {
                c.*member = parse_sigma_kind(unquote(text));
            } catch (const Error& e) {
                throw ConfigError(fmt::format("{}: {}", key, e.what()));
            }
        } else if constexpr (std::is_same_v<T, Scheme>) {
            try {
                c.*member = parse_scheme(unquote(text));
            } catch (const Error& e) {
                throw ConfigError(fmt::format("{}: {}", key, e.what()));
            }
        } else if constexpr (std::is_same_v<T, TailMode>) {
            const auto v = unquote(text);
            if (v == "redistribute") {
                c.*member = TailMode::redistribute;
            } else if (v == "alias") {
                c.*member = TailMode::alias;
            } else {
                throw ConfigError(fmt::format("{}: expected redistribute or alias", key));
            }
        }
    };
    f.get = [member](const RunConfig& c) -> std::string {
        const auto& v = c.*member;
        if constexpr (std::is_same_v<T, double>) {
            return fmt_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
            return v ? "true" : "false";
        } else if constexpr (std::is_integral_v<T>) {
            return std::to_string(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
            return "\"" + v + "\"";
        } else if constexpr (std::is_same_v<T, std::optional<double>>) {
            return v ? fmt_double(*v) : "none";
        } else if constexpr (std::is_same_v<T, std::vector<double>> || std::is_same_v<T, std::vector<long>>) {
            return fmt_list(v);
        } else if constexpr (std::is_same_v<T, SigmaKind> || std::is_same_v<T, Scheme>) {
            return "\"" + to_string(v) + "\"";
        } else if constexpr (std::is_same_v<T, TailMode>) {
            return v == TailMode::alias ? "\"alias\"" : "\"redistribute\"";
        }
    };
    return f;
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        field("walk", &RunConfig::walk),
        field("alpha", &RunConfig::alpha),
        field("truncation_radius", &RunConfig::truncation_radius),
        field("tail_mode", &RunConfig::tail_mode),
        field("eps", &RunConfig::eps),
        field("dt", &RunConfig::dt),
        field("T", &RunConfig::T),
        field("box_sites", &RunConfig::box_sites),
        field("sigma.kind", &RunConfig::sigma_kind),
        field("sigma.lambda", &RunConfig::sigma_lambda),
        field("sigma.clip", &RunConfig::sigma_clip),
        field("scheme", &RunConfig::scheme),
        field("seed", &RunConfig::seed),
        field("replicas", &RunConfig::replicas),
        field("snapshot_times", &RunConfig::snapshot_times),
        field("rho_exponent", &RunConfig::rho_exponent),
        field("out", &RunConfig::out),
        field("moment.points", &RunConfig::moment_points),
        field("moment.power", &RunConfig::moment_power),
        field("moment.translation_average", &RunConfig::moment_translation_average),
        field("sigma_bar.kind", &RunConfig::sigma_bar_kind),
        field("sigma_bar.lambda", &RunConfig::sigma_bar_lambda),
        field("sigma_bar.clip", &RunConfig::sigma_bar_clip),
        field("ladder", &RunConfig::ladder),
        field("rate.rho", &RunConfig::rate_rho),
        field("lyapunov.k", &RunConfig::lyapunov_k),
        field("lyapunov.t0", &RunConfig::lyapunov_t0),
        field("lyapunov.t1", &RunConfig::lyapunov_t1),
        field("lyapunov.points", &RunConfig::lyapunov_points),
        field("holder.eps", &RunConfig::holder_eps),
        field("holder.s", &RunConfig::holder_s),
        field("holder.gaps", &RunConfig::holder_gaps),
        field("kernel.alpha", &RunConfig::kernel_alpha),
        field("kernel.nu", &RunConfig::kernel_nu),
        field("kernel.t", &RunConfig::kernel_t),
        field("kernel.eps", &RunConfig::kernel_eps),
        field("kernel.box_sites", &RunConfig::kernel_box_sites),
        field("lclt.eps", &RunConfig::lclt_eps),
        field("lclt.t", &RunConfig::lclt_t),
        field("green.eps", &RunConfig::green_eps),
        field("green.samples", &RunConfig::green_samples),
    };
    return table;
}

const Field& find_field(std::string_view key) {
    for (const auto& f : fields()) {
        if (f.key == key) return f;
    }
    throw ConfigError(fmt::format("unknown config key '{}'", key));
}

}  // namespace

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
    find_field(trim(key)).set(config, value);
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(fmt::format("line {}: expected key = value", line_no));
        const auto key = trim(line.substr(0, eq));
        if (!seen.insert(std::string(key)).second) {
            throw ConfigError(fmt::format("line {}: key '{}' given twice", line_no, key));
        }
        try {
            set_config_value(config, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("line {}: {}", line_no, e.what()));
        }
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open config {}", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string echo_config(const RunConfig& config) {
    std::string out;
    for (const auto& f : fields()) out += f.key + " = " + f.get(config) + "\n";
    return out;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& f : fields()) keys.push_back(f.key);
    return keys;
}

WalkModel make_walk(const RunConfig& config) {
    if (config.walk == "simple") {
        if (config.alpha != 2.0) throw ConfigError("the simple walk has alpha = 2");
        return make_simple_walk();
    }
    if (config.walk == "stable_tail") {
        if (config.tail_mode == TailMode::alias) {
            if (config.box_sites == 0) throw ConfigError("an aliased walk needs box_sites");
            return make_stable_tail_walk(config.alpha, static_cast<int>(config.box_sites / 2), config.box_sites,
                                         TailMode::alias);
        }
        const auto radius = config.truncation_radius;
        return make_stable_tail_walk(config.alpha, radius, 2 * static_cast<std::size_t>(std::max(radius, 0)));
    }
    throw ConfigError(fmt::format("unknown walk '{}' (simple or stable_tail)", config.walk));
}

SigmaSpec sigma_of(const RunConfig& config) {
    SigmaSpec s{config.sigma_kind, config.sigma_lambda, config.sigma_clip};
    s.validate();
    return s;
}

SigmaSpec sigma_bar_of(const RunConfig& config) {
    SigmaSpec s{config.sigma_bar_kind, config.sigma_bar_lambda, config.sigma_bar_clip};
    s.validate();
    return s;
}

SheConfig to_she_config(const RunConfig& config) {
    SheConfig c;
    c.walk = make_walk(config);
    c.eps = config.eps;
    c.dt = config.dt;
    c.T = config.T;
    c.n = config.box_sites;
    c.sigma = sigma_of(config);
    c.scheme = config.scheme;
    c.seed = config.seed;
    c.replica = 0;
    c.rho_exponent = config.rho_exponent;
    c.snapshot_times = config.snapshot_times;
    return c;
}

}  // namespace shelab
