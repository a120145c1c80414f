#include "beprod/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace beprod {

using nlohmann::json;

ParseError::ParseError(const std::string& what, int line_, int col_)
    : std::runtime_error("parse error at line " + std::to_string(line_) + ", column " +
                         std::to_string(col_) + ": " + what),
      line(line_),
      column(col_) {}

namespace {

std::pair<int, int> line_col_of(const std::string& text, std::size_t byte_pos) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte_pos && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json matrix_to_obj(const ComplexMatrix& m) {
    json j;
    j["rows"] = m.rows;
    j["cols"] = m.cols;
    auto& ent = j["entries"] = json::array();
    for (const cplx& z : m.entries) ent.push_back({z.real(), z.imag()});
    return j;
}

ComplexMatrix matrix_from_obj(const json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    std::vector<cplx> e;
    e.reserve(rows * cols);
    for (const auto& pair : j.at("entries")) {
        e.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    return ComplexMatrix(rows, cols, std::move(e));
}

json gate_to_obj(const Gate& g, const std::vector<std::string>& externalize, MatrixTable* sidecar) {
    json j;
    j["kind"] = kind_name(g.kind);
    j["targets"] = g.targets;
    auto& ctl = j["controls"] = json::array();
    for (const Control& c : g.controls) ctl.push_back({c.wire, c.positive ? "+" : "-"});
    switch (g.kind) {
        case GateKind::Ry:
        case GateKind::Phase:
        case GateKind::ControlledPhase:
            j["theta"] = g.theta;
            break;
        case GateKind::AddConst:
            j["width"] = g.width;
            j["addend"] = g.addend;
            break;
        case GateKind::Oracle: {
            j["label"] = g.label;
            const bool external = sidecar && std::find(externalize.begin(), externalize.end(),
                                                       g.label) != externalize.end();
            if (external) {
                (*sidecar)[g.label] = *g.matrix;
                j["matrix"] = g.label;
            } else {
                j["matrix"] = matrix_to_obj(*g.matrix);
            }
            break;
        }
        default:
            break;
    }
    return j;
}

Gate gate_from_obj(const json& j, const MatrixTable& sidecar) {
    Gate g;
    g.kind = kind_from_name(j.at("kind").get<std::string>());
    g.targets = j.at("targets").get<std::vector<int>>();
    if (j.contains("controls")) {
        for (const auto& c : j.at("controls")) {
            const auto pol = c.at(1).get<std::string>();
            if (pol != "+" && pol != "-") throw std::invalid_argument("bad control polarity " + pol);
            g.controls.push_back({c.at(0).get<int>(), pol == "+"});
        }
    }
    switch (g.kind) {
        case GateKind::Ry:
        case GateKind::Phase:
        case GateKind::ControlledPhase:
            g.theta = j.at("theta").get<double>();
            break;
        case GateKind::AddConst:
            g.width = j.at("width").get<int>();
            g.addend = j.at("addend").get<std::uint64_t>();
            if (static_cast<int>(g.targets.size()) != g.width) {
                throw std::invalid_argument("AddConst: width disagrees with targets");
            }
            g.addend &= (std::uint64_t{1} << g.width) - 1;
            break;
        case GateKind::Oracle: {
            g.label = j.value("label", std::string{});
            const auto& m = j.at("matrix");
            ComplexMatrix mat;
            if (m.is_string()) {
                const auto key = m.get<std::string>();
                auto it = sidecar.find(key);
                if (it == sidecar.end()) {
                    throw std::invalid_argument("Oracle matrix label '" + key +
                                                "' not found in sidecar table");
                }
                mat = it->second;
            } else {
                mat = matrix_from_obj(m);
            }
            return Gate::oracle(g.label, std::move(mat), g.targets).with_controls(g.controls);
        }
        default:
            break;
    }
    return g;
}

}  // namespace

std::string serialize(const Circuit& c) {
    MatrixTable unused;
    return serialize(c, {}, unused);
}

std::string serialize(const Circuit& c, const std::vector<std::string>& externalize,
                      MatrixTable& sidecar) {
    json j;
    j["n_wires"] = c.n_wires;
    auto& gates = j["gates"] = json::array();
    for (const Gate& g : c.gates) gates.push_back(gate_to_obj(g, externalize, &sidecar));
    if (!c.labels.empty()) j["labels"] = c.labels;
    return j.dump(2);
}

Circuit deserialize(const std::string& text, const MatrixTable& sidecar) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col_of(text, e.byte);
        throw ParseError(e.what(), line, col);
    }
    try {
        Circuit c(j.at("n_wires").get<int>());
        for (const auto& gj : j.at("gates")) c.add(gate_from_obj(gj, sidecar));
        if (j.contains("labels")) c.labels = j.at("labels").get<std::vector<std::string>>();
        return c;
    } catch (const json::exception& e) {
        throw ParseError(e.what(), 1, 1);
    }
}

Circuit load_circuit_file(const std::string& path, const MatrixTable& sidecar) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open circuit file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str(), sidecar);
}

void save_circuit_file(const Circuit& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write circuit file: " + path);
    out << serialize(c) << "\n";
}

std::string sidecar_to_json(const MatrixTable& table) {
    json j = json::object();
    for (const auto& [label, m] : table) j[label] = matrix_to_obj(m);
    return j.dump(2);
}

MatrixTable sidecar_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col_of(text, e.byte);
        throw ParseError(e.what(), line, col);
    }
    MatrixTable table;
    for (const auto& [label, m] : j.items()) table[label] = matrix_from_obj(m);
    return table;
}

MatrixTable load_sidecar_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sidecar file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return sidecar_from_json(ss.str());
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string gate_to_line(const Gate& g) {
    std::ostringstream os;
    if (!g.controls.empty()) {
        os << "ctrl[";
        for (std::size_t i = 0; i < g.controls.size(); ++i) {
            if (i) os << ",";
            os << (g.controls[i].positive ? "+" : "-") << g.controls[i].wire;
        }
        os << "] ";
    }
    switch (g.kind) {
        case GateKind::X: os << "x"; break;
        case GateKind::Z: os << "z"; break;
        case GateKind::H: os << "h"; break;
        case GateKind::CNOT: os << "cnot"; break;
        case GateKind::Swap: os << "swap"; break;
        case GateKind::Ry: os << "ry(" << fmt_double(g.theta) << ")"; break;
        case GateKind::Phase: os << "phase(" << fmt_double(g.theta) << ")"; break;
        case GateKind::ControlledPhase: os << "cphase(" << fmt_double(g.theta) << ")"; break;
        case GateKind::AddConst: os << "addconst(" << g.width << "," << g.addend << ")"; break;
        case GateKind::Oracle: os << "oracle(" << g.label << ")"; break;
    }
    for (std::size_t i = 0; i < g.targets.size(); ++i) os << (i ? "," : " ") << "w" << g.targets[i];
    os << ";";
    return os.str();
}

}  // namespace

std::string export_text(const Circuit& c, std::vector<std::string>* warnings) {
    std::ostringstream os;
    os << "wires " << c.n_wires << ";\n";
    for (const Gate& g : c.gates) {
        if (g.kind == GateKind::Oracle && warnings) {
            warnings->push_back("oracle '" + g.label +
                                "' exported as opaque named gate (no registered decomposition)");
        }
        os << gate_to_line(g) << "\n";
    }
    return os.str();
}

namespace {

struct LineLexer {
    const std::string& s;
    std::size_t pos = 0;
    int line_no;
    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg, line_no, static_cast<int>(pos) + 1);
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' ||
                s[pos] == '\xE2' || s[pos] == '\x80' || s[pos] == '\xA0')) {
            ++pos;
        }
        if (start == pos) fail("expected identifier");
        return s.substr(start, pos - start);
    }
    long long number() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) fail("expected integer");
        return std::stoll(s.substr(start, pos - start));
    }
    double real() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) ||
                                  s[pos] == '-' || s[pos] == '+' || s[pos] == '.' ||
                                  s[pos] == 'e' || s[pos] == 'E')) {
            ++pos;
        }
        if (start == pos) fail("expected number");
        return std::stod(s.substr(start, pos - start));
    }
};

}  // namespace

Circuit import_text(const std::string& text, const MatrixTable& sidecar) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    Circuit c;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find("//");
        if (comment != std::string::npos) line = line.substr(0, comment);
        LineLexer lx{line, 0, line_no};
        lx.skip_ws();
        if (lx.pos >= line.size()) continue;
        if (!have_header) {
            const std::string kw = lx.ident();
            if (kw != "wires") lx.fail("expected 'wires' header");
            c = Circuit(static_cast<int>(lx.number()));
            lx.expect(';');
            have_header = true;
            continue;
        }
        Gate g;
        std::vector<Control> controls;
        std::string name = lx.ident();
        if (name == "ctrl") {
            lx.expect('[');
            while (true) {
                lx.skip_ws();
                bool positive = true;
                if (lx.eat('+')) {
                    positive = true;
                } else if (lx.eat('-')) {
                    positive = false;
                } else {
                    lx.fail("expected control polarity '+' or '-'");
                }
                controls.push_back({static_cast<int>(lx.number()), positive});
                if (!lx.eat(',')) break;
            }
            lx.expect(']');
            name = lx.ident();
        }
        double theta = 0.0;
        int width = 0;
        std::uint64_t addend = 0;
        std::string label;
        if (name == "ry" || name == "phase" || name == "cphase") {
            lx.expect('(');
            theta = lx.real();
            lx.expect(')');
        } else if (name == "addconst") {
            lx.expect('(');
            width = static_cast<int>(lx.number());
            lx.expect(',');
            addend = static_cast<std::uint64_t>(lx.number());
            lx.expect(')');
        } else if (name == "oracle") {
            lx.expect('(');
            label = lx.ident();
            lx.expect(')');
        }
        std::vector<int> targets;
        while (true) {
            lx.skip_ws();
            if (!lx.eat('w')) lx.fail("expected wire 'w<k>'");
            targets.push_back(static_cast<int>(lx.number()));
            if (!lx.eat(',')) break;
        }
        lx.expect(';');

        if (name == "x") {
            g = Gate::x(targets.at(0));
        } else if (name == "z") {
            g = Gate::z(targets.at(0));
        } else if (name == "h") {
            g = Gate::h(targets.at(0));
        } else if (name == "ry") {
            g = Gate::ry(targets.at(0), theta);
        } else if (name == "phase") {
            g = Gate::phase(targets.at(0), theta);
        } else if (name == "cnot") {
            if (controls.size() != 1) lx.fail("cnot needs exactly one ctrl[...] control");
            g.kind = GateKind::CNOT;
            g.targets = targets;
            g.controls = controls;
            c.add(g);
            continue;
        } else if (name == "cphase") {
            if (controls.size() != 1) lx.fail("cphase needs exactly one ctrl[...] control");
            g.kind = GateKind::ControlledPhase;
            g.targets = targets;
            g.theta = theta;
            g.controls = controls;
            c.add(g);
            continue;
        } else if (name == "swap") {
            g = Gate::swap(targets.at(0), targets.at(1));
        } else if (name == "addconst") {
            g = Gate::add_const(targets, addend);
            if (g.width != width) lx.fail("addconst width disagrees with target count");
        } else if (name == "oracle") {
            auto it = sidecar.find(label);
            if (it == sidecar.end()) lx.fail("oracle '" + label + "' not found in sidecar table");
            g = Gate::oracle(label, it->second, targets);
        } else {
            lx.fail("unknown gate '" + name + "'");
        }
        c.add(g.with_controls(controls));
    }
    if (!have_header) throw ParseError("missing 'wires' header", 1, 1);
    return c;
}

}  // namespace beprod
