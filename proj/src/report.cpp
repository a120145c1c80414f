#include "beprod/report.hpp"

#include <charconv>
#include <sstream>

#include "json.hpp"

namespace beprod {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string status_name(VerifyStatus s) {
    switch (s) {
        case VerifyStatus::pass: return "pass";
        case VerifyStatus::fail: return "fail";
        case VerifyStatus::skipped: return "skipped";
    }
    return "?";
}

}  // namespace

void fill_counts(Report& r, const Circuit& c) {
    r.qubit_count = c.n_wires;
    r.gate_histogram.clear();
    r.oracle_queries = 0;
    for (const Gate& g : c.gates) {
        ++r.gate_histogram[kind_name(g.kind)];
        if (g.kind == GateKind::Oracle) ++r.oracle_queries;
    }
    r.elementary_estimate = elementary_cost_estimate(c);
}

Report make_report(const std::string& construction, const BlockEncoding& be,
                   const VerifyResult& vr, const RunConfig& cfg) {
    Report r;
    r.construction = construction;
    fill_counts(r, be.circuit);
    r.alpha_out = be.alpha;
    r.verification = status_name(vr.status);
    r.max_deviation = vr.max_deviation;
    r.verification_note = vr.note;
    r.seed = cfg.seed;
    return r;
}

std::string Report::to_text() const {
    std::ostringstream os;
    os << "construction: " << construction << "\n";
    os << "qubits: " << qubit_count << "\n";
    os << "gates:";
    if (gate_histogram.empty()) os << " (none)";
    for (const auto& [kind, count] : gate_histogram) os << " " << kind << "=" << count;
    os << "\n";
    os << "oracle queries: " << oracle_queries << "\n";
    os << "elementary estimate: " << elementary_estimate << "\n";
    if (!bound_formula.empty()) {
        os << "cost bound: " << bound_formula << "\n";
        os << "measured: " << bound_measured << "\n";
    }
    os << "alpha_out: " << fmt_double(alpha_out) << "\n";
    os << "verification: " << verification;
    if (verification != "skipped") os << " (max deviation " << fmt_double(max_deviation) << ")";
    if (!verification_note.empty()) os << " [" << verification_note << "]";
    os << "\n";
    if (success_probability) {
        os << "postselection success probability: " << fmt_double(*success_probability) << "\n";
    }
    os << "seed: " << seed << "\n";
    return os.str();
}

std::string Report::to_json() const {
    nlohmann::json j;
    j["construction"] = construction;
    j["qubit_count"] = qubit_count;
    j["gate_histogram"] = gate_histogram;
    j["oracle_queries"] = oracle_queries;
    j["elementary_estimate"] = elementary_estimate;
    j["bound_formula"] = bound_formula;
    j["bound_measured"] = bound_measured;
    j["verification"] = verification;
    j["max_deviation"] = max_deviation;
    j["verification_note"] = verification_note;
    j["alpha_out"] = alpha_out;
    if (success_probability) j["success_probability"] = *success_probability;
    j["seed"] = seed;
    return j.dump(2);
}

}  // namespace beprod
