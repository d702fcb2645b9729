// Command-line front end: loads JSON documents (or named built-ins), runs the
// exact computations, and prints a machine-readable report {"result": ...,
// "witness"?: ..., "violations"?: ...} on standard output.  Exit codes:
// 0 success, 1 domain error (report carries the error name), 2 parse or
// validation error.

#include <array>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "torinv/affine_groups.hpp"
#include "torinv/builtins.hpp"
#include "torinv/bundle_cocycles.hpp"
#include "torinv/constructions.hpp"
#include "torinv/document.hpp"
#include "torinv/errors.hpp"
#include "torinv/exact_linalg.hpp"
#include "torinv/twisted_complex.hpp"

namespace {

using nlohmann::json;
using namespace torinv;

void print_report(const json& report) { std::cout << report.dump(2) << "\n"; }

template <typename T>
T expect_kind(Document doc, const char* kind_name) {
    T* payload = std::get_if<T>(&doc.payload);
    if (!payload)
        throw ParseError("expected a '" + std::string(kind_name) + "' document, got '" +
                         document_kind(doc) + "'");
    return std::move(*payload);
}

IntMatrix random_unimodular3(std::mt19937_64& rng, int steps) {
    IntMatrix m = IntMatrix::identity(3);
    std::uniform_int_distribution<int> idx(0, 2);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int s = 0; s < steps; ++s) {
        int i = idx(rng);
        int j = idx(rng);
        if (i == j) continue;
        Int c(coeff(rng));
        for (std::size_t k = 0; k < 3; ++k) m.at(i, k) += c * m.at(j, k);
    }
    return m;
}

IntVec parse_class_vector(const std::string& text) {
    IntVec out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        if (part.empty()) throw ParseError("class vector has an empty component");
        try {
            out.push_back(Int(part));
        } catch (const std::exception&) {
            throw ParseError("class component '" + part + "' is not an integer");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ParseError("class vector is empty");
    return out;
}

json group_to_json(const AbelianGroup& g) {
    return json{{"group", g.to_string()},
                {"free_rank", g.free_rank},
                {"torsion", int_vec_to_json(g.torsion)}};
}

int run_snf(const std::string& input) {
    const IntMatrix& m = expect_kind<IntMatrix>(load_document(input), "matrix");
    SmithDecomposition snf = smith_normal_form(m);
    print_report(json{{"result",
                       json{{"D", int_matrix_to_json(snf.D)},
                            {"U", int_matrix_to_json(snf.U)},
                            {"V", int_matrix_to_json(snf.V)}}}});
    return 0;
}

int run_cohomology(const std::string& input, std::size_t degree) {
    const TwistedComplexDocument& doc =
        expect_kind<TwistedComplexDocument>(load_document(input), "complex");
    CochainComplex cc = to_cochain_complex(doc.complex, doc.twisting);
    print_report(json{{"result", group_to_json(cohomology(cc, degree))}});
    return 0;
}

int run_monodromy(const std::string& input) {
    const TransitionData& td =
        expect_kind<TransitionData>(load_document(input), "transition-data");
    Representation rep = monodromy_of(td);
    print_report(json{{"result", document_to_json(Document{rep})}});
    return 0;
}

int run_chern(const std::string& input) {
    const TransitionData& td =
        expect_kind<TransitionData>(load_document(input), "transition-data");
    ChernCocycle c = chern_cocycle(td);
    ClassCoordinates coords = chern_class_coordinates(c);
    print_report(json{
        {"result", json{{"cocycle", document_to_json(Document{c})},
                        {"class", json{{"free", int_vec_to_json(coords.free)},
                                       {"torsion", int_vec_to_json(coords.torsion)},
                                       {"torsion_moduli",
                                        int_vec_to_json(coords.torsion_moduli)}}}}}});
    return 0;
}

int run_verify(const std::string& input) {
    const TransitionData& td =
        expect_kind<TransitionData>(load_document(input), "transition-data");
    VerificationReport report = verify_cocycle(td);
    if (report.ok) {
        print_report(json{{"result", "ok"}});
    } else {
        print_report(json{{"result", "invalid"}, {"violations", report.violations}});
    }
    return 0;
}

int run_twist(const std::string& input, const std::string& class_text) {
    const TransitionData& td =
        expect_kind<TransitionData>(load_document(input), "transition-data");
    IntVec shift_class = parse_class_vector(class_text);
    Representation rep = monodromy_of(td);
    ChernCocycle shift = reference_cocycle(td.nerve, rep, shift_class);
    TransitionData out = twist_by_class(td, shift.values);
    print_report(json{{"result", document_to_json(Document{out})}});
    return 0;
}

int run_realize(const std::string& input, const std::string& class_text) {
    const TransitionData& td =
        expect_kind<TransitionData>(load_document(input), "transition-data");
    IntVec target_class = parse_class_vector(class_text);
    Representation rep = monodromy_of(td);
    ChernCocycle target = reference_cocycle(td.nerve, rep, target_class);
    TransitionData out = realize_class(td.nerve, rep, target);
    print_report(json{{"result", document_to_json(Document{out})}});
    return 0;
}

int run_conjugacy(const std::string& first, const std::string& second,
                  long long bound) {
    const Representation& r1 =
        expect_kind<Representation>(load_document(first), "representation");
    const Representation& r2 =
        expect_kind<Representation>(load_document(second), "representation");
    ConjugacyResult res = conjugacy_check(r1, r2, Int(bound));
    json report;
    switch (res.verdict) {
        case ConjugacyResult::Verdict::Conjugate:
            report["result"] = "conjugate";
            report["witness"] = int_matrix_to_json(res.witness->matrix());
            break;
        case ConjugacyResult::Verdict::NotConjugate:
            report["result"] = "not-conjugate";
            break;
        case ConjugacyResult::Verdict::Unknown:
            report["result"] = "unknown";
            break;
    }
    if (!res.reason.empty()) report["reason"] = res.reason;
    print_report(report);
    return 0;
}

// Fixed-seed sweeps over the analytic identities of the explicit attaching
// maps, plus the primitivity of their class vectors.
int run_example_sweeps() {
    std::mt19937_64 rng(0x5eedu);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);

    auto random_base = [&]() {
        while (true) {
            BasePoint x{{coord(rng), coord(rng), coord(rng)}};
            if (x.x[0] * x.x[0] + x.x[1] * x.x[1] > 1e-2) return x;
        }
    };

    double max_equivariance = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        BasePoint x = random_base();
        TorusPoint2Pi t = make_torus_point({angle(rng), angle(rng), angle(rng)});
        max_equivariance = std::max(max_equivariance, check_equivariance(x, t));
    }
    bool equivariance_ok = max_equivariance < 1e-9;

    double max_closedness = 0.0;
    int closedness_samples = 0;
    while (closedness_samples < 200) {
        BasePoint x = random_base();
        if (x.x[0] < 0 && std::fabs(x.x[1]) < 1e-2) continue;  // branch-cut margin
        ++closedness_samples;
        max_closedness = std::max(max_closedness, check_closedness(x, 1e-4));
    }
    bool closedness_ok = max_closedness < 1e-6;

    double max_inversion = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        BasePoint x = random_base();
        TorusPoint2Pi t = make_torus_point({angle(rng), angle(rng), angle(rng)});
        Sign sign = trial % 2 ? Sign::plus : Sign::minus;
        AttachResult r = attach_h(sign, x, t);
        std::array<double, 3> phi = sign == Sign::plus ? phi_plus(x) : phi_minus(x);
        TorusPoint2Pi undone = make_torus_point({r.fiber.coords[0] - phi[0],
                                                 r.fiber.coords[1] - phi[1],
                                                 r.fiber.coords[2] - phi[2]});
        max_inversion = std::max(max_inversion, toral_distance(undone, t));
    }
    bool inversion_ok = max_inversion < 1e-12;

    std::uniform_int_distribution<int> steps(4, 24);
    bool primitive_ok = true;
    for (int trial = 0; trial < 200 && primitive_ok; ++trial) {
        GLnZ g(random_unimodular3(rng, steps(rng)));
        primitive_ok = gcd_vec(chern_vector(g)) == 1;
    }

    json result{{"equivariance", json{{"samples", 1000},
                                      {"max_deviation", max_equivariance},
                                      {"tolerance", 1e-9},
                                      {"pass", equivariance_ok}}},
                {"closedness", json{{"samples", closedness_samples},
                                    {"step", 1e-4},
                                    {"max_residual", max_closedness},
                                    {"tolerance", 1e-6},
                                    {"pass", closedness_ok}}},
                {"attachment_inversion", json{{"samples", 200},
                                              {"max_deviation", max_inversion},
                                              {"tolerance", 1e-12},
                                              {"pass", inversion_ok}}},
                {"class_vector_primitivity",
                 json{{"samples", 200}, {"pass", primitive_ok}}}};
    bool all_ok = equivariance_ok && closedness_ok && inversion_ok && primitive_ok;
    print_report(json{{"result", result}});
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact invariants of torus-bundle gluing data: normal forms, "
                 "twisted cohomology, monodromy, and obstruction classes."};
    app.require_subcommand(1);

    std::string input, second_input, class_text;
    std::size_t degree = 0;
    long long bound = 4000000;

    CLI::App* snf = app.add_subcommand("snf", "Smith normal form of a matrix document");
    snf->add_option("input", input, "matrix document (path or builtin:<name>)")
        ->required();

    CLI::App* coh = app.add_subcommand(
        "cohomology", "Cohomology of a complex document in one degree");
    coh->add_option("--degree", degree, "cohomological degree")->required();
    coh->add_option("input", input, "complex document (path or builtin:<name>)")
        ->required();

    CLI::App* mon = app.add_subcommand(
        "monodromy", "Monodromy representation of transition data");
    mon->add_option("input", input, "transition-data document")->required();

    CLI::App* chern = app.add_subcommand(
        "chern", "Obstruction cocycle and class coordinates of transition data");
    chern->add_option("input", input, "transition-data document")->required();

    CLI::App* verify = app.add_subcommand(
        "verify-cocycle", "Check the cocycle condition of transition data");
    verify->add_option("input", input, "transition-data document")->required();

    CLI::App* twist = app.add_subcommand(
        "twist", "Re-glue transition data to shift its class by a vector");
    twist->add_option("--class", class_text,
                      "integer shift in free class coordinates, comma-separated")
        ->required();
    twist->add_option("input", input, "transition-data document")->required();

    CLI::App* realize = app.add_subcommand(
        "realize", "Construct data with the given class and the input's monodromy");
    realize->add_option("--class", class_text,
                        "target class in free coordinates, comma-separated")
        ->required();
    realize->add_option("input", input, "transition-data document")->required();

    CLI::App* conj = app.add_subcommand(
        "conjugacy", "Decide integral conjugacy of two representation documents");
    conj->add_option("--bound", bound, "search budget for the witness enumeration");
    conj->add_option("first", input, "representation document")->required();
    conj->add_option("second", second_input, "representation document")->required();

    app.add_subcommand("paper-examples",
                       "Run the example sweeps for the attaching-map identities");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (snf->parsed()) return run_snf(input);
        if (coh->parsed()) return run_cohomology(input, degree);
        if (mon->parsed()) return run_monodromy(input);
        if (chern->parsed()) return run_chern(input);
        if (verify->parsed()) return run_verify(input);
        if (twist->parsed()) return run_twist(input, class_text);
        if (realize->parsed()) return run_realize(input, class_text);
        if (conj->parsed()) return run_conjugacy(input, second_input, bound);
        return run_example_sweeps();
    } catch (const ParseError& e) {
        print_report(json{{"result", "error"},
                          {"error", "ParseError"},
                          {"message", e.what()}});
        return 2;
    } catch (const DomainError& e) {
        print_report(
            json{{"result", "error"}, {"error", e.name()}, {"message", e.what()}});
        return 1;
    }
}
