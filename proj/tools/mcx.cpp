#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "mcx/checks.hpp"
#include "mcx/jsonio.hpp"

using namespace mcx;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw err("IOError", "cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// shared convention switches; every report echoes them so results under
// different conventions are never silently compared
struct ConvOpts {
    std::string weight = "0";
    int twist = 1;
    void attach(CLI::App* cmd) {
        cmd->add_option("--eigenspace-weight", weight, "stored scalar eigenspace, 0 or top")
            ->check(CLI::IsMember({"0", "top"}));
        cmd->add_option("--quotient-twist", twist, "q-power shift of the invariant quotient")
            ->check(CLI::IsMember({0, 1}));
    }
    Conventions get() const { return Conventions{weight == "top", twist}; }
};

void emit(const char* command, const Conventions& cv, Json body) {
    body["command"] = command;
    body["conventions"] = conventions_to_json(cv);
    std::cout << body.dump(2) << "\n";
}

Json value_pair(const CycloNum& z) {
    return Json{{"exact", cyclo_to_json(z)}, {"approx", approx_to_json(z)}};
}

long base_q(long p, long m) {
    long q = 1;
    for (long i = 0; i < m; ++i) q *= p;
    return q;
}

int run(int argc, char** argv) {
    CLI::App app{"exact middle convolution calculator"};
    app.require_subcommand(1);
    ConvOpts cv;

    auto* c_charsum = app.add_subcommand("charsum", "Gauss and Jacobi sums");
    long cs_p = 0, cs_m = 1, cs_e = -1, cs_order = 0, cs_with = -1;
    c_charsum->add_option("--p", cs_p, "base prime")->required();
    c_charsum->add_option("--m", cs_m, "base degree");
    c_charsum->add_option("--chi-e", cs_e, "character exponent");
    c_charsum->add_option("--chi-order", cs_order, "character order, picks e = (q-1)/order");
    c_charsum->add_option("--jacobi-with", cs_with, "second exponent for a Jacobi sum");
    cv.attach(c_charsum);

    auto* c_eps = app.add_subcommand("eps", "local epsilon factor");
    std::string ep_input, ep_point;
    c_eps->add_option("--input", ep_input, "sheaf JSON file")->required();
    c_eps->add_option("--point", ep_point, "singular point index, or inf")->required();
    cv.attach(c_eps);

    auto* c_det = app.add_subcommand("det", "H^1_c and middle determinants");
    std::string dt_input;
    long dt_e = 0, dt_y = 0;
    c_det->add_option("--input", dt_input, "sheaf JSON file")->required();
    c_det->add_option("--chi-e", dt_e, "convolution character exponent")->required();
    c_det->add_option("--y", dt_y, "encoded base-rational point outside S")->required();
    cv.attach(c_det);

    auto* c_mc = app.add_subcommand("mc", "middle convolution of local data");
    std::string mc_input, mc_output;
    long mc_e = 0;
    c_mc->add_option("--input", mc_input, "sheaf JSON file")->required();
    c_mc->add_option("--chi", mc_e, "convolution character exponent")->required();
    c_mc->add_option("--output", mc_output, "write the output sheaf JSON here");
    cv.attach(c_mc);

    auto* c_oracle = app.add_subcommand("oracle", "brute-force character-sum traces");
    std::string or_input;
    long or_e = -1, or_y = 0, or_k = 1, or_charpoly = 0;
    c_oracle->add_option("--sheaf", or_input, "explicit sheaf JSON file")->required();
    c_oracle->add_option("--chi", or_e, "append one convolution by this exponent");
    c_oracle->add_option("--y", or_y, "encoded base-rational point")->required();
    c_oracle->add_option("--k", or_k, "extension degree for the trace");
    c_oracle->add_option("--charpoly", or_charpoly, "H^1_c symmetric functions e_1..e_d");
    cv.attach(c_oracle);

    auto* c_pipe = app.add_subcommand("pipeline", "run a convolution script");
    std::string pp_script;
    long pp_p = 0, pp_m = 1;
    std::vector<long> pp_samples;
    bool pp_oracle = false;
    c_pipe->add_option("--script", pp_script, "steps JSON file")->required();
    c_pipe->add_option("--p", pp_p, "base prime")->required();
    c_pipe->add_option("--m", pp_m, "base degree");
    c_pipe->add_option("--samples", pp_samples, "encoded cross-check points");
    c_pipe->add_flag("--with-oracle", pp_oracle, "keep the brute-force track and cross-check");
    cv.attach(c_pipe);

    auto* c_rig = app.add_subcommand("rigidity", "rigidity index of local data");
    std::string rg_input;
    c_rig->add_option("--input", rg_input, "sheaf JSON file")->required();
    cv.attach(c_rig);

    auto* c_check = app.add_subcommand("check", "full invariant suite");
    int ck_threads = 1;
    std::string ck_only;
    c_check->add_option("--threads", ck_threads, "worker threads");
    c_check->add_option("--only", ck_only, "run only checks whose name contains this");
    cv.attach(c_check);

    CLI11_PARSE(app, argc, argv);

    if (c_charsum->parsed()) {
        long q = base_q(cs_p, cs_m);
        if (cs_e < 0) {
            if (cs_order <= 0 || (q - 1) % cs_order != 0)
                throw err("SchemaError", "need --chi-e, or --chi-order dividing q - 1");
            cs_e = (q - 1) / cs_order;
        }
        MulChar chi{cs_p, cs_m, cs_e};
        CycloNum g = gauss_sum(chi);
        Json body{{"base", Json{{"p", cs_p}, {"m", cs_m}}},
                  {"chi_e", chi.e},
                  {"chi_order", chi.order()},
                  {"gauss_sum", value_pair(g)},
                  {"gauss_pair", value_pair(g * gauss_sum(chi.inverse()))}};
        if (cs_with >= 0)
            body["jacobi_sum"] = value_pair(jacobi_sum(chi, MulChar{cs_p, cs_m, cs_with}));
        emit("charsum", cv.get(), std::move(body));
        return 0;
    }
    if (c_eps->parsed()) {
        SheafData F = sheaf_from_json(parse_json(read_file(ep_input)));
        long q = F.base().q;
        const LocalData* L = nullptr;
        if (ep_point == "inf") {
            L = &F.infinity;
        } else {
            size_t idx = 0;
            try {
                idx = (size_t)std::stol(ep_point);
            } catch (const std::exception&) {
                throw err("SchemaError", "--point must be an index or inf");
            }
            if (idx >= F.singular.size()) throw err("SchemaError", "point index out of range");
            L = &F.singular[idx].second;
        }
        CycloNum e = epsilon0_point(*L, q, CycloNum(1), cv.get());
        emit("eps", cv.get(),
             Json{{"point", ep_point}, {"epsilon0", value_pair(e)},
                  {"det_local", value_pair(det_local(*L, q, cv.get()))}});
        return 0;
    }
    if (c_det->parsed()) {
        SheafData F = sheaf_from_json(parse_json(read_file(dt_input)));
        MulChar chi{F.p, F.m, dt_e};
        emit("det", cv.get(),
             Json{{"chi_e", chi.e},
                  {"y", dt_y},
                  {"det_h1c", value_pair(det_h1c(F, chi, dt_y, cv.get()))},
                  {"det_mc", value_pair(det_mc(F, chi, dt_y, cv.get()))}});
        return 0;
    }
    if (c_mc->parsed()) {
        SheafData F = sheaf_from_json(parse_json(read_file(mc_input)));
        MulChar chi{F.p, F.m, mc_e};
        SheafData G = mc_sheaf(F, chi, cv.get());
        Json gj = sheaf_to_json(G);
        if (!mc_output.empty()) {
            std::ofstream out(mc_output);
            if (!out) throw err("IOError", "cannot write " + mc_output);
            out << gj.dump(2) << "\n";
        }
        emit("mc", cv.get(),
             Json{{"chi_e", chi.e}, {"rank", G.rank}, {"sheaf", std::move(gj)}});
        return 0;
    }
    if (c_oracle->parsed()) {
        ExplicitSheaf E = explicit_from_json(parse_json(read_file(or_input)));
        if (or_e >= 0) E.history.push_back({MulChar{E.p, E.m, or_e}, CycloNum(1)});
        Oracle O(E);
        long lvl = O.levels();
        long y = or_k == 1 ? or_y : get_embedding(E.p, E.m, E.m * or_k).embed(or_y);
        Json body{{"level", lvl}, {"y", or_y}, {"k", or_k}};
        // the middle-extension stalk needs tracked infinity scalars; report
        // the j_!-trace alongside and flag the middle value when unavailable
        try {
            body["middle_trace"] = value_pair(O.trace(lvl, or_k, y));
        } catch (const Error& e) {
            body["middle_trace"] = Json{{"error", e.code()}};
        }
        if (lvl > 0) body["h1c_trace"] = value_pair(O.h1c_trace(or_k, or_y));
        if (or_charpoly > 0) {
            Json esf = Json::array();
            for (const auto& e : O.charpoly(or_y, or_charpoly))
                if (!(esf.empty() && e == CycloNum(1))) esf.push_back(value_pair(e));
            body["charpoly_esf"] = std::move(esf);
        }
        emit("oracle", cv.get(), std::move(body));
        return 0;
    }
    if (c_pipe->parsed()) {
        auto steps = script_from_json(parse_json(read_file(pp_script)), pp_p, pp_m);
        PipelineState st = initial_state(pp_p, pp_m, cv.get(), pp_samples);
        if (!pp_oracle) st.concrete.reset();
        Json trace = Json::array();
        for (const auto& s : steps) {
            apply_step(st, s);
            trace.push_back(Json{
                {"op", s.kind == PipelineStep::Kind::MiddleTensor ? "mt" : "mc"},
                {"chi_e", s.chi.e},
                {"rank", st.data.rank}});
        }
        emit("pipeline", cv.get(),
             Json{{"base", Json{{"p", pp_p}, {"m", pp_m}}},
                  {"with_oracle", pp_oracle},
                  {"steps", std::move(trace)},
                  {"final", sheaf_to_json(st.data)},
                  {"rigidity_index", rigidity_index(st.data)}});
        return 0;
    }
    if (c_rig->parsed()) {
        SheafData F = sheaf_from_json(parse_json(read_file(rg_input)));
        emit("rigidity", cv.get(), Json{{"rigidity_index", rigidity_index(F)}});
        return 0;
    }
    if (c_check->parsed()) {
        CheckReport rep;
        if (ck_only.empty()) {
            rep = run_check_suite(ck_threads);
        } else {
            using Fn = CheckLine (*)(int);
            std::pair<const char*, Fn> all[] = {
                {"gauss-jacobi identities", check_gauss_jacobi},
                {"epsilon factor laws", check_epsilon_laws},
                {"determinant oracle equivalence", check_determinant_oracle},
                {"rank and local data", check_rank_local_data},
                {"convention pinning", check_convention_pinning},
                {"quadratic determinant preservation", check_quadratic_preservation},
                {"involution Tate twist", check_involution}};
            for (const auto& [name, fn] : all)
                if (std::string(name).find(ck_only) != std::string::npos)
                    rep.lines.push_back(fn(ck_threads));
            if (rep.lines.empty()) throw err("SchemaError", "no check matches --only");
        }
        Json lines = Json::array();
        for (const auto& l : rep.lines)
            lines.push_back(Json{{"name", l.name},
                                 {"pass", l.pass},
                                 {"cases", l.cases},
                                 {"detail", l.detail}});
        emit("check", cv.get(), Json{{"lines", std::move(lines)}, {"all_pass", rep.all_pass()}});
        return rep.all_pass() ? 0 : 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        Json j{{"error", Json{{"code", e.code()}, {"message", e.what()}}}};
        std::cout << j.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        Json j{{"error", Json{{"code", "Internal"}, {"message", e.what()}}}};
        std::cout << j.dump(2) << "\n";
        return 3;
    }
}
