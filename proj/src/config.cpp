#include "chainpde/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "chainpde/field_io.hpp"

namespace chainpde {

namespace {

struct RawValue {
    enum class Kind { number, boolean, string, number_array, string_array };
    Kind kind = Kind::number;
    double num = 0.0;
    bool flag = false;
    std::string str;
    std::vector<double> nums;
    std::vector<std::string> strs;
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

double parse_num(const std::string& s, int lineno) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": bad number '" + s + "'");
    }
}

std::vector<std::string> split_array_items(const std::string& inner, int lineno) {
    std::vector<std::string> items;
    std::string cur;
    bool quoted = false;
    for (char c : inner) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
            items.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw ConfigError("config line " + std::to_string(lineno) +
                          ": unterminated string");
    const std::string last = trim(cur);
    if (!last.empty()) items.push_back(last);
    for (const std::string& it : items)
        if (it.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty array element");
    return items;
}

RawValue parse_value(const std::string& text, int lineno) {
    RawValue v;
    if (text.empty())
        throw ConfigError("config line " + std::to_string(lineno) + ": missing value");
    if (text == "true" || text == "false") {
        v.kind = RawValue::Kind::boolean;
        v.flag = text == "true";
        return v;
    }
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"')
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": unterminated string");
        v.kind = RawValue::Kind::string;
        v.str = text.substr(1, text.size() - 2);
        if (v.str.find('"') != std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": embedded quote in string");
        return v;
    }
    if (text.front() == '[') {
        if (text.back() != ']')
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": unterminated array");
        const auto items = split_array_items(text.substr(1, text.size() - 2), lineno);
        const bool strings = !items.empty() && items.front().front() == '"';
        if (strings) {
            v.kind = RawValue::Kind::string_array;
            for (const std::string& it : items) {
                if (it.size() < 2 || it.front() != '"' || it.back() != '"')
                    throw ConfigError("config line " + std::to_string(lineno) +
                                      ": mixed array element types");
                v.strs.push_back(it.substr(1, it.size() - 2));
            }
        } else {
            v.kind = RawValue::Kind::number_array;
            for (const std::string& it : items) v.nums.push_back(parse_num(it, lineno));
        }
        return v;
    }
    v.kind = RawValue::Kind::number;
    v.num = parse_num(text, lineno);
    v.str = text; // raw token, kept for exact 64-bit integer parsing
    return v;
}

double want_number(const RawValue& v, const std::string& where) {
    if (v.kind != RawValue::Kind::number)
        throw ConfigError("config: " + where + " expects a number");
    return v.num;
}

int want_int(const RawValue& v, const std::string& where) {
    const double d = want_number(v, where);
    const double r = std::round(d);
    if (std::abs(d - r) > 0.0 || std::abs(r) > 1e15)
        throw ConfigError("config: " + where + " expects an integer");
    return static_cast<int>(r);
}

std::uint64_t want_u64(const RawValue& v, const std::string& where) {
    // Parse from the raw token: going through double would silently drop
    // bits of seeds above 2^53.
    if (v.kind != RawValue::Kind::number || v.str.empty() ||
        !std::all_of(v.str.begin(), v.str.end(),
                     [](unsigned char c) { return std::isdigit(c); }))
        throw ConfigError("config: " + where + " expects a non-negative integer");
    try {
        return std::stoull(v.str);
    } catch (const std::exception&) {
        throw ConfigError("config: " + where + " is out of range");
    }
}

std::string want_string(const RawValue& v, const std::string& where) {
    if (v.kind != RawValue::Kind::string)
        throw ConfigError("config: " + where + " expects a quoted string");
    return v.str;
}

std::vector<double> want_numbers(const RawValue& v, const std::string& where) {
    if (v.kind == RawValue::Kind::number_array) return v.nums;
    throw ConfigError("config: " + where + " expects an array of numbers");
}

std::vector<int> want_ints(const RawValue& v, const std::string& where) {
    const auto nums = want_numbers(v, where);
    std::vector<int> out;
    out.reserve(nums.size());
    for (double d : nums) {
        if (d != std::round(d))
            throw ConfigError("config: " + where + " expects integers");
        out.push_back(static_cast<int>(d));
    }
    return out;
}

void apply_field_key(FieldSpec& fs, const std::string& section,
                     const std::string& key, const RawValue& v) {
    const std::string where = "[" + section + "]." + key;
    if (key == "kind")
        fs.kind = want_string(v, where);
    else if (key == "value")
        fs.value = want_number(v, where);
    else if (key == "mode")
        fs.mode = want_ints(v, where);
    else if (key == "index")
        fs.index = want_int(v, where);
    else if (key == "center")
        fs.center = want_numbers(v, where);
    else if (key == "width")
        fs.width = want_numbers(v, where);
    else if (key == "path")
        fs.path = want_string(v, where);
    else
        throw ConfigError("config: unknown key '" + key + "' in section [" +
                          section + "]");
}

std::string emit_num(double v) { return format_g17(v); }

std::string emit_num_array(const std::vector<double>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += emit_num(v[i]);
    }
    return out + "]";
}

std::string emit_int_array(const std::vector<int>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(v[i]);
    }
    return out + "]";
}

void emit_field_section(std::ostringstream& os, const std::string& name,
                        const FieldSpec& fs) {
    os << "[" << name << "]\n";
    os << "kind = \"" << fs.kind << "\"\n";
    os << "value = " << emit_num(fs.value) << "\n";
    os << "mode = " << emit_int_array(fs.mode) << "\n";
    os << "index = " << fs.index << "\n";
    os << "center = " << emit_num_array(fs.center) << "\n";
    os << "width = " << emit_num_array(fs.width) << "\n";
    os << "path = \"" << fs.path << "\"\n";
}

} // namespace

RunConfig RunConfig::parse_string(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            static const std::vector<std::string> known = {
                "domain", "potential", "u0", "f", "zeta", "run",
                "outer", "elliptic", "checks", "multistart", "oracle"};
            bool ok = false;
            for (const std::string& k : known) ok = ok || k == section;
            if (!ok)
                throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const RawValue v = parse_value(trim(line.substr(eq + 1)), lineno);
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key '" + key + "' outside any section");
        const std::string where = "[" + section + "]." + key;

        if (section == "domain") {
            if (key == "dim") c.dim = want_int(v, where);
            else if (key == "extents") c.extents = want_numbers(v, where);
            else if (key == "nodes") c.nodes = want_ints(v, where);
            else throw ConfigError("config: unknown key '" + key +
                                   "' in section [domain]");
        } else if (section == "potential") {
            if (key == "name") c.potential_name = want_string(v, where);
            else if (key == "table_s") c.table_s = want_numbers(v, where);
            else if (key == "table_phi") c.table_phi = want_numbers(v, where);
            else throw ConfigError("config: unknown key '" + key +
                                   "' in section [potential]");
        } else if (section == "u0") {
            apply_field_key(c.u0, section, key, v);
        } else if (section == "f") {
            apply_field_key(c.f, section, key, v);
        } else if (section == "zeta") {
            apply_field_key(c.zeta, section, key, v);
        } else if (section == "run") {
            if (key == "T") c.total_time = want_number(v, where);
            else if (key == "nt") c.time_steps = want_int(v, where);
            else if (key == "seed") c.seed = want_u64(v, where);
            else if (key == "outdir") c.outdir = want_string(v, where);
            else if (key == "snapshot_times") c.snapshot_times = want_numbers(v, where);
            else throw ConfigError("config: unknown key '" + key +
                                   "' in section [run]");
        } else if (section == "outer") {
            if (key == "tol") c.outer_tol = want_number(v, where);
            else if (key == "max_iter") c.outer_max_iterations = want_int(v, where);
            else if (key == "alpha") c.outer_damping = want_number(v, where);
            else throw ConfigError("config: unknown key '" + key +
                                   "' in section [outer]");
        } else if (section == "elliptic") {
            if (key == "tol") c.elliptic_tol = want_number(v, where);
            else if (key == "max_iter") c.elliptic_max_iterations = want_int(v, where);
            else if (key == "max_halvings") c.elliptic_max_halvings = want_int(v, where);
            else if (key == "eta_clamp") c.eta_clamp = want_number(v, where);
            else throw ConfigError("config: unknown key '" + key +
                                   "' in section [elliptic]");
        } else if (section == "checks") {
            if (key == "slack") c.check_slack = want_number(v, where);
            else if (key == "cg_rel_tol") c.cg_rel_tol = want_number(v, where);
            else throw ConfigError("config: unknown key '" + key +
                                   "' in section [checks]");
        } else if (section == "multistart") {
            if (key == "starts") c.starts = want_int(v, where);
            else throw ConfigError("config: unknown key '" + key +
                                   "' in section [multistart]");
        } else if (section == "oracle") {
            if (key == "mode") c.oracle_mode = want_string(v, where);
            else if (key == "u0") c.oracle_u0 = want_number(v, where);
            else if (key == "quadrature") c.oracle_quadrature = want_string(v, where);
            else throw ConfigError("config: unknown key '" + key +
                                   "' in section [oracle]");
        }
    }
    return c;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    return parse_string(read_text_file(path));
}

std::string RunConfig::emit() const {
    std::ostringstream os;
    os << "[domain]\n";
    os << "dim = " << dim << "\n";
    os << "extents = " << emit_num_array(extents) << "\n";
    os << "nodes = " << emit_int_array(nodes) << "\n";
    os << "[potential]\n";
    os << "name = \"" << potential_name << "\"\n";
    os << "table_s = " << emit_num_array(table_s) << "\n";
    os << "table_phi = " << emit_num_array(table_phi) << "\n";
    emit_field_section(os, "u0", u0);
    emit_field_section(os, "f", f);
    emit_field_section(os, "zeta", zeta);
    os << "[run]\n";
    os << "T = " << emit_num(total_time) << "\n";
    os << "nt = " << time_steps << "\n";
    os << "seed = " << seed << "\n";
    os << "outdir = \"" << outdir << "\"\n";
    os << "snapshot_times = " << emit_num_array(snapshot_times) << "\n";
    os << "[outer]\n";
    os << "tol = " << emit_num(outer_tol) << "\n";
    os << "max_iter = " << outer_max_iterations << "\n";
    os << "alpha = " << emit_num(outer_damping) << "\n";
    os << "[elliptic]\n";
    os << "tol = " << emit_num(elliptic_tol) << "\n";
    os << "max_iter = " << elliptic_max_iterations << "\n";
    os << "max_halvings = " << elliptic_max_halvings << "\n";
    os << "eta_clamp = " << emit_num(eta_clamp) << "\n";
    os << "[checks]\n";
    os << "slack = " << emit_num(check_slack) << "\n";
    os << "cg_rel_tol = " << emit_num(cg_rel_tol) << "\n";
    os << "[multistart]\n";
    os << "starts = " << starts << "\n";
    os << "[oracle]\n";
    os << "mode = \"" << oracle_mode << "\"\n";
    os << "u0 = " << emit_num(oracle_u0) << "\n";
    os << "quadrature = \"" << oracle_quadrature << "\"\n";
    return os.str();
}

GridPtr RunConfig::make_grid() const {
    if (dim == 1) {
        if (extents.size() != 1 || nodes.size() != 1)
            throw ConfigError("config: [domain] extents/nodes must have 1 entry in 1-D");
        return Grid::interval(extents[0], nodes[0]);
    }
    if (dim == 2) {
        if (extents.size() != 2 || nodes.size() != 2)
            throw ConfigError("config: [domain] extents/nodes must have 2 entries in 2-D");
        return Grid::rectangle(extents[0], extents[1], nodes[0], nodes[1]);
    }
    throw ConfigError("config: [domain].dim must be 1 or 2");
}

Potential RunConfig::make_potential() const {
    if (potential_name == "table")
        return Potential::from_table(table_s, table_phi);
    return Potential::builtin(potential_name);
}

Field RunConfig::make_field(const FieldSpec& fs, const GridPtr& g) const {
    const double pi = std::numbers::pi;
    if (fs.kind == "zero") return Field::zeros(g);
    if (fs.kind == "constant")
        return Field::from_function(g, [&](double, double) { return fs.value; });
    if (fs.kind == "sine") {
        if (static_cast<int>(fs.mode.size()) != g->dim())
            throw ConfigError("config: sine field needs one mode entry per axis");
        for (int m : fs.mode)
            if (m < 1) throw ConfigError("config: sine mode must be >= 1");
        return Field::from_function(g, [&](double x, double y) {
            double v = std::sin(fs.mode[0] * pi * x / g->extent(0));
            if (g->dim() == 2) v *= std::sin(fs.mode[1] * pi * y / g->extent(1));
            return v;
        });
    }
    if (fs.kind == "eigenmode") {
        const auto pairs = eigenpairs(g, fs.index);
        return pairs.back().mode;
    }
    if (fs.kind == "bump") {
        std::vector<double> c = fs.center, w = fs.width;
        if (c.empty())
            for (int a = 0; a < g->dim(); ++a) c.push_back(0.5 * g->extent(a));
        if (w.empty())
            for (int a = 0; a < g->dim(); ++a) w.push_back(0.4 * g->extent(a));
        if (static_cast<int>(c.size()) != g->dim() ||
            static_cast<int>(w.size()) != g->dim())
            throw ConfigError("config: bump center/width need one entry per axis");
        for (double wa : w)
            if (!(wa > 0.0)) throw ConfigError("config: bump width must be positive");
        return Field::from_function(g, [&](double x, double y) {
            const double xs[2] = {x, y};
            double v = 1.0;
            for (int a = 0; a < g->dim(); ++a) {
                const double r = (xs[a] - c[static_cast<size_t>(a)]) /
                                 w[static_cast<size_t>(a)];
                if (std::abs(r) >= 1.0) return 0.0;
                v *= std::exp(1.0 - 1.0 / (1.0 - r * r));
            }
            return v;
        });
    }
    if (fs.kind == "csv") {
        if (fs.path.empty()) throw ConfigError("config: csv field needs a path");
        return load_field_csv(g, fs.path);
    }
    throw ConfigError("config: unknown field kind '" + fs.kind + "'");
}

ProblemSpec RunConfig::make_problem() const {
    ProblemSpec spec;
    spec.grid = make_grid();
    spec.potential = make_potential();
    spec.u0 = make_field(u0, spec.grid);
    spec.total_time = total_time;
    spec.time_steps = time_steps;
    spec.outer_tol = outer_tol;
    spec.max_outer_iterations = outer_max_iterations;
    spec.damping = outer_damping;
    spec.elliptic.tolerance = elliptic_tol;
    spec.elliptic.max_iterations = elliptic_max_iterations;
    spec.elliptic.max_halvings = elliptic_max_halvings;
    spec.elliptic.eta_clamp = eta_clamp;
    spec.elliptic.cg_rel_tol = cg_rel_tol;
    spec.elliptic.check_slack = check_slack;
    spec.cg_rel_tol = cg_rel_tol;
    spec.check_slack = check_slack;
    return spec;
}

} // namespace chainpde
