#include "jbcli/commands.hpp"

#include "cohomlab/cohomlab.hpp"
#include "deform/deform.hpp"
#include "jetalg/errors.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#ifndef JBCLI_GOLDEN_DIR
#define JBCLI_GOLDEN_DIR "share/golden"
#endif

namespace jbcli {

using jetalg::AlgebraError;
using jetalg::Coefficient;
using jetalg::DiffPoly;
using jetalg::Rat;
using structures::PoissonPair;
using varcalc::LocalFunctional;

// ----------------------------------------------------------------- report

bool Report::pass() const
{
    for (const auto& [name, ok] : verdicts)
        if (!ok)
            return false;
    return true;
}

void Report::field(std::string name, std::string value)
{
    fields.emplace_back(std::move(name), std::move(value));
}

void Report::verdict(std::string name, bool ok)
{
    verdicts.emplace_back(std::move(name), ok);
}

std::string Report::text(bool withTiming) const
{
    std::ostringstream os;
    os << "command: " << command << "\n";
    for (const auto& [name, ok] : verdicts)
        os << "verdict " << name << ": " << (ok ? "PASS" : "FAIL") << "\n";
    for (const auto& [name, value] : fields) {
        if (name.empty())
            os << value << "\n";
        else
            os << name << ": " << value << "\n";
    }
    if (withTiming)
        os << "time-ms: " << millis << "\n";
    if (!verdicts.empty())
        os << (pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::string Report::json_text() const
{
    nlohmann::json j;
    j["command"] = command;
    j["verdicts"] = nlohmann::json::array();
    for (const auto& [name, ok] : verdicts)
        j["verdicts"].push_back({ { "name", name }, { "pass", ok } });
    j["fields"] = nlohmann::json::array();
    for (const auto& [name, value] : fields)
        j["fields"].push_back({ { "name", name }, { "value", value } });
    j["pass"] = pass();
    j["time_ms"] = millis;
    return j.dump(2) + "\n";
}

// ------------------------------------------------------------- resolution

std::string render_functional(const LocalFunctional& f)
{
    return render_value(Value { f.density, true });
}

SourceFile command_scope(const std::string& filePath)
{
    SourceFile scope;
    if (!filePath.empty()) {
        std::ifstream in(filePath);
        if (!in)
            throw AlgebraError("cannot open file: " + filePath);
        std::stringstream buf;
        buf << in.rdbuf();
        scope = parse(buf.str());
    }
    if (!scope.has_function("c")) {
        jetalg::register_symbol("c");
        scope.functions.push_back("c");
    }
    return scope;
}

namespace {

Coefficient coefficient_only(const Value& v, const std::string& what)
{
    if (v.integrated)
        throw AlgebraError(what + " must not be integrated");
    if (v.density.is_zero())
        return Coefficient(Rat(0));
    const auto& terms = v.density.terms();
    if (terms.size() != 1 || !(terms.begin()->first == jetalg::Monomial {}))
        throw AlgebraError(what + " must be a function of u alone (no jets)");
    return terms.begin()->second;
}

struct FixtureMember {
    std::string base;
    std::string member; // "P1" or "P2"
};

// Splits "dkdv.P1" / "deformed(c,4).P2" into base and member; nullopt when
// the operand is not of that shape.
std::optional<FixtureMember> split_member(const std::string& s)
{
    std::size_t dot = s.rfind('.');
    if (dot == std::string::npos || dot + 1 >= s.size())
        return std::nullopt;
    std::string member = s.substr(dot + 1);
    if (member != "P1" && member != "P2")
        return std::nullopt;
    return FixtureMember { s.substr(0, dot), member };
}

bool is_deformed_fixture(const std::string& base)
{
    return base.rfind("deformed(", 0) == 0 && base.back() == ')';
}

structures::DeformationSeries deformed_fixture(const std::string& base,
    const SourceFile& scope)
{
    std::string inner = base.substr(9, base.size() - 10);
    std::size_t comma = inner.rfind(',');
    if (comma == std::string::npos)
        throw AlgebraError("deformed(c,order): missing order argument");
    std::string cexpr = inner.substr(0, comma);
    std::string orderStr = inner.substr(comma + 1);
    int order = 0;
    try {
        order = std::stoi(orderStr);
    } catch (const std::exception&) {
        throw AlgebraError("deformed(c,order): bad order '" + orderStr + "'");
    }
    Coefficient c = resolve_central_invariant(cexpr, scope);
    return structures::deformed_pair(c, order);
}

std::optional<PoissonPair> named_pair(const std::string& name)
{
    if (name == "dkdv")
        return structures::dkdv_pair();
    if (name == "kdv")
        return structures::kdv_pair();
    if (name == "ch")
        return structures::ch_pair();
    return std::nullopt;
}

} // namespace

LocalFunctional resolve_functional(const std::string& operand, const SourceFile& scope)
{
    if (const Value* v = scope.find(operand)) {
        if (!v->integrated)
            throw AlgebraError("'" + operand
                + "' is a density; wrap the declaration in int(...)");
        return LocalFunctional(v->density);
    }
    if (std::optional<FixtureMember> fm = split_member(operand)) {
        if (std::optional<PoissonPair> p = named_pair(fm->base))
            return fm->member == "P1" ? p->P1 : p->P2;
        if (is_deformed_fixture(fm->base)) {
            structures::DeformationSeries ser = deformed_fixture(fm->base, scope);
            return fm->member == "P1" ? ser.base.P1 : ser.deformed_second();
        }
    }
    Value v = parse_expression(operand, scope);
    if (!v.integrated)
        throw AlgebraError(
            "operand must be a local functional; write it as int(...)");
    return LocalFunctional(v.density);
}

PoissonPair resolve_pair(const std::string& operand)
{
    if (std::optional<PoissonPair> p = named_pair(operand))
        return *p;
    if (std::filesystem::exists(operand)) {
        SourceFile f = command_scope(operand);
        const Value* p1 = f.find("P1");
        const Value* p2 = f.find("P2");
        if (!p1 || !p2 || !p1->integrated || !p2->integrated)
            throw AlgebraError(
                "pair file must declare P1 and P2 as int(...) functionals");
        PoissonPair pair;
        pair.P1 = LocalFunctional(p1->density);
        pair.P2 = LocalFunctional(p2->density);
        return pair;
    }
    throw AlgebraError("unknown pair '" + operand
        + "' (expected dkdv, kdv, ch, or a declaration file)");
}

Coefficient resolve_central_invariant(const std::string& operand,
    const SourceFile& scope)
{
    return coefficient_only(parse_expression(operand, scope),
        "central invariant");
}

// ---------------------------------------------------------------- commands

namespace {

std::string trim_trailing(const std::string& s)
{
    std::string out = s;
    while (!out.empty() && (out.back() == '\n' || out.back() == ' ' || out.back() == '\t'))
        out.pop_back();
    return out;
}

std::string read_golden(const std::string& name)
{
    std::string path = std::string(JBCLI_GOLDEN_DIR) + "/" + name + ".txt";
    std::ifstream in(path);
    if (!in)
        throw AlgebraError("missing golden file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return trim_trailing(buf.str());
}

Report cmd_bracket(const std::string& a, const std::string& b, const SourceFile& scope)
{
    Report r;
    LocalFunctional fa = resolve_functional(a, scope);
    LocalFunctional fb = resolve_functional(b, scope);
    r.field("result", render_functional(varcalc::schouten(fa, fb)));
    return r;
}

Report cmd_jacobi(const std::string& p, const SourceFile& scope)
{
    Report r;
    varcalc::Verdict v = varcalc::is_poisson(resolve_functional(p, scope));
    r.verdict("jacobi", v.ok);
    r.field("residual", render_functional(v.residual));
    return r;
}

Report cmd_compat(const std::string& p1, const std::string& p2, const SourceFile& scope)
{
    Report r;
    varcalc::Verdict v = varcalc::is_compatible(
        resolve_functional(p1, scope), resolve_functional(p2, scope));
    r.verdict("compatible", v.ok);
    r.field("residual", render_functional(v.residual));
    return r;
}

Report cmd_flow(const std::string& p, const std::string& h, const SourceFile& scope)
{
    Report r;
    LocalFunctional x = varcalc::hamiltonian_flow(
        resolve_functional(p, scope), resolve_functional(h, scope));
    r.field("flow", render_functional(x));
    std::vector<DiffPoly> comps = varcalc::flow_components(x);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        std::string lhs = comps.size() == 1
            ? std::string("u_t")
            : "u[" + std::to_string(i + 1) + "]_t";
        r.field(lhs, jetalg::to_text(comps[i]));
    }
    return r;
}

Report cmd_deform(const std::string& pairName, const std::string& cexpr, int order,
    int jetMax, int udegMax, const SourceFile& scope)
{
    Report r;
    if (order < 2 || order % 2 != 0)
        throw AlgebraError("--order must be a positive even integer");
    PoissonPair pair = resolve_pair(pairName);
    Coefficient c = resolve_central_invariant(cexpr, scope);

    std::vector<LocalFunctional> qs;
    qs.push_back(structures::infinitesimal_from_central_invariant(c));
    r.field("eps^2 correction", render_functional(qs.front()));

    for (int m = 2; 2 * m <= order; ++m) {
        deform::AnsatzSpace cfg { 1, 0, jetMax, udegMax };
        deform::DeformStep step = deform::solve_next_order(pair, qs, cfg);
        std::string label = "eps^" + std::to_string(2 * m);
        r.verdict(label + " solved", step.status == deform::SolveStatus::Solved);
        if (step.status != deform::SolveStatus::Solved) {
            r.field("status",
                step.status == deform::SolveStatus::ObstructionNonzero
                    ? "obstruction nonzero"
                    : "ansatz too small");
            r.field("residual", render_functional(step.obstruction.residual));
            r.field("ansatz", "N=" + std::to_string(step.used.N)
                    + ",K=" + std::to_string(step.used.K));
            break;
        }
        r.field(label + " correction", render_functional(step.Q));
        r.field(label + " ansatz", "N=" + std::to_string(step.used.N)
                + ",K=" + std::to_string(step.used.K));
        qs.push_back(step.Q);
    }
    return r;
}

Report cmd_trivialize(const std::string& q, const std::string& against,
    int jetMax, int udegMax, const SourceFile& scope)
{
    Report r;
    deform::AnsatzSpace cfg { 1, 0, jetMax, udegMax };
    deform::TrivializeResult tr = deform::trivialize(
        resolve_functional(q, scope), resolve_functional(against, scope), cfg);
    r.verdict("trivialized", tr.ok);
    if (tr.ok)
        r.field("X", render_functional(tr.X));
    else
        r.field("hint", tr.hint);
    return r;
}

Report cmd_miura(const std::string& x, const std::string& p, int order,
    const SourceFile& scope)
{
    Report r;
    if (order < 0)
        throw AlgebraError("--order must be nonnegative");
    LocalFunctional moved = deform::miura_apply(
        resolve_functional(x, scope), resolve_functional(p, scope), order);
    r.field("result", render_functional(moved));
    return r;
}

Report cmd_cohom(int p, int d, int jetMax, int udegMax, int slackArg, bool scan,
    int cap)
{
    Report r;
    if (p < 0 || d < 0)
        throw AlgebraError("--p and --d must be nonnegative");
    cohomlab::Slack slack { slackArg, slackArg };
    if (scan) {
        cohomlab::ScanSchedule sched;
        sched.n0 = jetMax >= 0 ? jetMax : d;
        sched.k0 = udegMax >= 0 ? udegMax : d;
        sched.cap = cap;
        cohomlab::ScanResult res = cohomlab::stabilization_scan(
            [&](int N, int K) {
                return cohomlab::bh_dimension(
                    cohomlab::GradedSector { p, d, N, K, -1 }, slack);
            },
            sched);
        std::ostringstream line;
        line << "dim " << res.value << " ("
             << (res.stabilized ? "stabilized at " : "not stabilized; ")
             << "N=" << res.N << ",K=" << res.K << ")";
        r.field("", line.str());
        r.field("dim", std::to_string(res.value));
        r.field("N", std::to_string(res.N));
        r.field("K", std::to_string(res.K));
        std::ostringstream hist;
        for (std::size_t i = 0; i < res.history.size(); ++i)
            hist << (i ? "," : "") << res.history[i];
        r.field("history", hist.str());
        r.verdict("stabilized", res.stabilized);
        return r;
    }
    int n = jetMax >= 0 ? jetMax : d;
    int k = udegMax >= 0 ? udegMax : d;
    int dim = cohomlab::bh_dimension(cohomlab::GradedSector { p, d, n, k, -1 }, slack);
    std::ostringstream line;
    line << "dim " << dim << " (N=" << n << ",K=" << k << ")";
    r.field("", line.str());
    r.field("dim", std::to_string(dim));
    r.field("N", std::to_string(n));
    r.field("K", std::to_string(k));
    return r;
}

Report cmd_render(const std::string& operand, bool delta, const SourceFile& scope)
{
    Report r;
    if (delta) {
        r.field("rendered",
            varcalc::render_delta_notation(resolve_functional(operand, scope)));
        return r;
    }
    if (const Value* v = scope.find(operand)) {
        r.field("rendered", render_value(*v));
        return r;
    }
    LocalFunctional f = resolve_functional(operand, scope);
    r.field("rendered", render_functional(f));
    return r;
}

// Frozen verification cases; each compares its salient content against the
// checked-in golden text.
Report cmd_verify(const std::string& name, const SourceFile& scope)
{
    Report r;
    std::string content;
    if (name == "section2-example") {
        LocalFunctional p = resolve_functional("int(u*u1*th)", scope);
        LocalFunctional q = resolve_functional("int(u2*th*th1)", scope);
        LocalFunctional br = varcalc::schouten(p, q);
        content = render_functional(br);
        Value display = parse_expression(
            "int(u*u1*th1*th2 + u*u1*th*th3 - u*u3*th*th1)", scope);
        r.verdict("matches-display",
            varcalc::functional_equal(br, LocalFunctional(display.density)));
    } else if (name == "lorenzoni-eps4") {
        Coefficient c = resolve_central_invariant("c", scope);
        structures::DeformationSeries ser = structures::deformed_pair(c, 4);
        LocalFunctional pd2 = ser.deformed_second();
        DiffPoly r12 = jetalg::standard_truncate(
            varcalc::schouten(ser.base.P1, pd2).density, 6);
        DiffPoly r22 = jetalg::standard_truncate(
            varcalc::schouten(pd2, pd2).density, 6);
        bool z12 = varcalc::functional_is_zero(LocalFunctional(r12));
        bool z22 = varcalc::functional_is_zero(LocalFunctional(r22));
        r.verdict("P1-compatible-through-eps4", z12);
        r.verdict("P2-jacobi-through-eps4", z22);
        // densities that integrate to zero print as the zero functional
        auto residual_text = [](bool zero, const DiffPoly& d) {
            return zero ? std::string("0") : jetalg::to_text(d);
        };
        std::ostringstream os;
        os << "[P1,Pd2] residual through eps^4: " << residual_text(z12, r12)
           << "\n"
           << "[Pd2,Pd2] residual through eps^4: " << residual_text(z22, r22);
        content = os.str();
    } else {
        throw AlgebraError("unknown verify case '" + name
            + "' (expected section2-example or lorenzoni-eps4)");
    }
    r.field("", content);
    r.verdict("matches-golden", trim_trailing(content) == read_golden(name));
    return r;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app { "jbcli: exact computations with differential polynomials "
                   "on jet superspace" };
    app.require_subcommand(1);
    app.fallthrough(); // parent-level --json/--file usable after a subcommand

    bool json = false;
    std::string file;
    app.add_flag("--json", json, "emit the machine-readable report");
    app.add_option("--file", file, "declaration file whose names are in scope");

    std::string argA, argB;
    CLI::App* bracket = app.add_subcommand("bracket", "Schouten bracket [A,B]");
    bracket->add_option("A", argA)->required();
    bracket->add_option("B", argB)->required();

    std::string argP;
    CLI::App* jacobi = app.add_subcommand("jacobi", "check [P,P] = 0");
    jacobi->add_option("P", argP)->required();

    std::string argP1, argP2;
    CLI::App* compat = app.add_subcommand("compat", "check [P1,P2] = 0");
    compat->add_option("P1", argP1)->required();
    compat->add_option("P2", argP2)->required();

    std::string argFP, argFH;
    CLI::App* flow = app.add_subcommand("flow", "Hamiltonian flow of H under P");
    flow->add_option("P", argFP)->required();
    flow->add_option("H", argFH)->required();

    std::string dPair = "dkdv", dCentral;
    int dOrder = 4, dJetMax = -1, dUdegMax = -1;
    CLI::App* deformCmd = app.add_subcommand("deform",
        "solve the deformation order by order from a central invariant");
    deformCmd->add_option("--pair", dPair, "base pair: dkdv, kdv, ch, or a file");
    deformCmd->add_option("--central-invariant", dCentral, "expression in u (or c)")
        ->required();
    deformCmd->add_option("--order", dOrder, "target eps order (even)");
    deformCmd->add_option("--jet-max", dJetMax, "ansatz jet-order bound");
    deformCmd->add_option("--udeg-max", dUdegMax, "ansatz u-degree bound");

    std::string tQ, tAgainst;
    int tJetMax = -1, tUdegMax = -1;
    CLI::App* trivializeCmd = app.add_subcommand("trivialize",
        "write a closed bivector as [P1,X]");
    trivializeCmd->add_option("Q", tQ)->required();
    trivializeCmd->add_option("--against", tAgainst, "the first structure")
        ->required();
    trivializeCmd->add_option("--jet-max", tJetMax, "ansatz jet-order bound");
    trivializeCmd->add_option("--udeg-max", tUdegMax, "ansatz u-degree bound");

    std::string mX, mP;
    int mOrder = 2;
    CLI::App* miuraCmd = app.add_subcommand("miura",
        "apply the Miura transform exp(ad_X) to P");
    miuraCmd->add_option("X", mX)->required();
    miuraCmd->add_option("P", mP)->required();
    miuraCmd->add_option("--order", mOrder, "truncation eps order");

    int cP = 0, cD = 0, cJetMax = -1, cUdegMax = -1, cSlack = 2, cCap = 6;
    bool cScan = false;
    CLI::App* cohomCmd = app.add_subcommand("cohom",
        "truncated bihamiltonian cohomology dimension");
    cohomCmd->add_option("--p", cP, "super degree")->required();
    cohomCmd->add_option("--d", cD, "standard degree")->required();
    cohomCmd->add_option("--jet-max", cJetMax, "jet-order bound (default d)");
    cohomCmd->add_option("--udeg-max", cUdegMax, "u-degree bound (default d)");
    cohomCmd->add_option("--slack", cSlack, "presentation slack (default 2)");
    cohomCmd->add_option("--cap", cCap, "scan increments past the start");
    cohomCmd->add_flag("--scan", cScan, "grow the window until stable");

    std::string vCase;
    CLI::App* verifyCmd = app.add_subcommand("verify", "run a frozen named case");
    verifyCmd->add_option("--case", vCase, "case name")->required();

    std::string rP;
    bool rDelta = false;
    CLI::App* renderCmd = app.add_subcommand("render", "canonical text form");
    renderCmd->add_option("P", rP)->required();
    renderCmd->add_flag("--delta", rDelta, "operator form with delta-functions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::ostringstream echo;
    for (int i = 1; i < argc; ++i)
        echo << (i > 1 ? " " : "") << argv[i];

    try {
        SourceFile scope = command_scope(file);
        auto start = std::chrono::steady_clock::now();
        Report r;
        if (*bracket)
            r = cmd_bracket(argA, argB, scope);
        else if (*jacobi)
            r = cmd_jacobi(argP, scope);
        else if (*compat)
            r = cmd_compat(argP1, argP2, scope);
        else if (*flow)
            r = cmd_flow(argFP, argFH, scope);
        else if (*deformCmd)
            r = cmd_deform(dPair, dCentral, dOrder, dJetMax, dUdegMax, scope);
        else if (*trivializeCmd)
            r = cmd_trivialize(tQ, tAgainst, tJetMax, tUdegMax, scope);
        else if (*miuraCmd)
            r = cmd_miura(mX, mP, mOrder, scope);
        else if (*cohomCmd)
            r = cmd_cohom(cP, cD, cJetMax, cUdegMax, cSlack, cScan, cCap);
        else if (*verifyCmd)
            r = cmd_verify(vCase, scope);
        else if (*renderCmd)
            r = cmd_render(rP, rDelta, scope);
        auto stop = std::chrono::steady_clock::now();
        r.command = echo.str();
        r.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
            stop - start)
                       .count();
        out << (json ? r.json_text() : r.text());
        return r.pass() ? 0 : 1;
    } catch (const ParseError& e) {
        err << "parse error at " << e.what() << "\n";
        return 2;
    } catch (const AlgebraError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace jbcli
