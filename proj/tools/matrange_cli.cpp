// matrange: command-line surface for the operator-system toolkit.
//
// Exit codes: 0 success / positive verdict, 1 negative verdict (NonMember,
// constraint violated, witness not found, fixture failures), 2 usage error
// (bad flags, unreadable matrix, wrong dimensions), 3 numerical failure
// (no convergence, ambiguous clustering, inconclusive verdicts).
#include <CLI11.hpp>
#include <json.hpp>
#include <matrange/matrange.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace {

using namespace matrange;

struct GlobalOpts {
    double tol = 1e-9;
    std::size_t grid = 720;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
};

// Named ids (j2, j3, jn:k, ex2.13-B, ...) take precedence; anything else is a
// path to a matrix JSON file {"rows","cols","data"}.
ComplexMatrix resolve_matrix(const std::string& arg) {
    try {
        return named_matrix(arg);
    } catch (const DomainError&) {
    }
    try {
        return read_matrix_file(arg);
    } catch (const IoError& e) {
        throw IoError("matrix '" + arg + "' is neither a built-in name (see --list-named) " +
                      "nor a readable JSON file: " + e.what());
    }
}

nlohmann::ordered_json cplx_json(cplx z) {
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

void emit(const nlohmann::ordered_json& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot open '" + out_path + "' for writing");
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("write to '" + out_path + "' failed");
    std::printf("wrote %s\n", out_path.c_str());
}

int cmd_check_psd(const GlobalOpts& g, const std::string& matrix_arg) {
    const ComplexMatrix m = resolve_matrix(matrix_arg);
    const PsdResult r = psd_check(m, g.tol);
    std::printf("psd=%s lambda_min=%.12g\n", r.psd ? "true" : "false", r.lambda_min);
    return r.psd ? 0 : 1;
}

int cmd_numrange(const GlobalOpts& g, const std::string& matrix_arg, bool csv,
                 const std::string& out_path) {
    const ComplexMatrix t = resolve_matrix(matrix_arg);
    const std::vector<BoundaryPoint> pts = boundary_points(t, g.grid);
    if (csv) {
        std::ostringstream os;
        os.precision(17);
        os << "theta,re,im\n";
        for (const BoundaryPoint& p : pts)
            os << p.theta << "," << p.point.real() << "," << p.point.imag() << "\n";
        if (out_path.empty()) {
            std::cout << os.str();
        } else {
            std::ofstream out(out_path);
            if (!out) throw IoError("cannot open '" + out_path + "' for writing");
            out << os.str();
            if (!out) throw IoError("write to '" + out_path + "' failed");
            std::printf("wrote %s (%zu points)\n", out_path.c_str(), pts.size());
        }
        return 0;
    }
    double re_lo = pts[0].point.real(), re_hi = re_lo;
    double im_lo = pts[0].point.imag(), im_hi = im_lo;
    for (const BoundaryPoint& p : pts) {
        re_lo = std::min(re_lo, p.point.real());
        re_hi = std::max(re_hi, p.point.real());
        im_lo = std::min(im_lo, p.point.imag());
        im_hi = std::max(im_hi, p.point.imag());
    }
    std::printf("boundary points: %zu\n", pts.size());
    std::printf("numerical radius: %.12g\n", numerical_radius(t, g.grid));
    std::printf("real extent: [%.12g, %.12g]\n", re_lo, re_hi);
    std::printf("imag extent: [%.12g, %.12g]\n", im_lo, im_hi);
    return 0;
}

int cmd_radius(const GlobalOpts& g, const std::string& matrix_arg) {
    const ComplexMatrix t = resolve_matrix(matrix_arg);
    std::printf("%.12g\n", numerical_radius(t, g.grid));
    return 0;
}

nlohmann::ordered_json certificate_json(const Certificate& c) {
    nlohmann::ordered_json j;
    if (const auto* s = std::get_if<SufficientCcl>(&c)) {
        j["type"] = "SufficientCcl";
        j["lambda_max"] = s->lambda_max;
    } else if (const auto* v = std::get_if<CriterionViolation>(&c)) {
        j["type"] = "CriterionViolation";
        j["alpha"] = cplx_json(v->alpha);
        j["beta"] = cplx_json(v->beta);
        j["norm_excess"] = v->norm_excess;
    } else if (const auto* s2 = std::get_if<SignedCase>(&c)) {
        j["type"] = "SignedCase";
        j["pattern"] = s2->pattern;
        j["sup"] = s2->sup;
    } else if (const auto* p = std::get_if<ProbeEvidence>(&c)) {
        j["type"] = "ProbeEvidence";
        j["trials"] = p->trials;
        j["violations"] = p->violations;
    } else if (const auto* w = std::get_if<WitnessCertificate>(&c)) {
        j["type"] = "WitnessCertificate";
        j["a"] = cplx_json(w->a);
        j["b"] = cplx_json(w->b);
        j["c"] = cplx_json(w->c);
        j["excess"] = w->excess;
    }
    return j;
}

int cmd_membership(const GlobalOpts& g, const std::string& target_arg,
                   const std::string& matrix_arg, std::size_t trials) {
    const ComplexMatrix t = resolve_matrix(target_arg);
    const ComplexMatrix j3 = jordan_block(3);
    if (t.rows() != 3 || t.cols() != 3 || (t - j3).max_abs() > 1e-12)
        throw DomainError(
            "membership: only the 3x3 Jordan block target (j3) is supported; "
            "the decision cascade is specific to span{I, J3, J3*}");
    const ComplexMatrix x = resolve_matrix(matrix_arg);
    const Verdict v = j3_membership(x, trials, g.seed);
    nlohmann::ordered_json doc;
    doc["status"] = to_string(v.status);
    doc["certificate"] = certificate_json(v.certificate);
    std::cout << doc.dump(2) << "\n";
    switch (v.status) {
        case MemberStatus::Member: return 0;
        case MemberStatus::NonMember: return 1;
        case MemberStatus::Inconclusive: return 3;
    }
    return 3;
}

int cmd_dilate(const std::string& matrix_arg, const std::string& method,
               const std::string& out_path) {
    const ComplexMatrix b = resolve_matrix(matrix_arg);
    DilationResult r;
    std::string used = method;
    if (method == "auto") used = (b.rows() == 2 && b.cols() == 2) ? "m2" : "doubling";
    if (used == "m2")
        r = dilate_m2(b);
    else if (used == "doubling")
        r = doubling_dilation(b);
    else
        throw DomainError("dilate: --method must be auto, m2, or doubling");
    nlohmann::ordered_json doc;
    doc["method"] = used;
    doc["ambient"] = matrix_to_json(r.ambient);
    doc["isometry"] = matrix_to_json(r.isometry);
    doc["residual_ccl"] = r.residual_ccl;
    doc["residual_compression"] = r.residual_compression;
    emit(doc, out_path);
    return 0;
}

int cmd_extreme_classify(const std::string& b1_arg, const std::string& b2_arg) {
    const ComplexMatrix b1 = resolve_matrix(b1_arg);
    const ComplexMatrix b2 = resolve_matrix(b2_arg);
    const ExtremeVerdict v = classify_extreme(b1, b2);
    std::printf("kind=%s", to_string(v.kind));
    if (v.kind == ExtremeKind::E2) std::printf(" k=%zu", v.k);
    std::printf("\n");
    std::printf("eigenvalues(B1^2+B2^2):");
    for (double lam : v.eigenvalues) std::printf(" %.12g", lam);
    std::printf("\n");
    if (!v.offending.empty()) {
        std::printf("band-ambiguous eigenvalues:");
        for (double lam : v.offending) std::printf(" %.12g", lam);
        std::printf("\n");
    }
    if (v.witness) {
        const WitnessPair& w = *v.witness;
        const double dist = (w.c.first - w.d.first).frobenius_norm() +
                            (w.c.second - w.d.second).frobenius_norm();
        std::printf("witness: t=%.12g frobenius_separation=%.12g verified=%s\n", w.t, dist,
                    verify_witness(b1, b2, w) ? "true" : "false");
    }
    switch (v.kind) {
        case ExtremeKind::E1:
        case ExtremeKind::E2: return 0;
        case ExtremeKind::NotExtreme: return 1;
        case ExtremeKind::Inconclusive: return 3;
    }
    return 3;
}

int cmd_reduce_normal(const GlobalOpts& g, const std::string& matrix_arg) {
    const ComplexMatrix m = resolve_matrix(matrix_arg);
    if (m.rows() != 4 || !m.is_square())
        throw DimensionMismatch("reduce-normal: the matrix must be 4x4");
    const ComplexMatrix comm = m * m.adjoint() - m.adjoint() * m;
    const double scale = 1.0 + m.frobenius_norm() * m.frobenius_norm();
    if (comm.frobenius_norm() > std::max(g.tol, 1e-9) * scale)
        throw DomainError("reduce-normal: the matrix is not normal (||MM*-M*M|| = " +
                          std::to_string(comm.frobenius_norm()) + ")");
    const auto [basis, eigs] = detail::diag_normal(m);
    (void)basis;
    const NormalReduction r = normal4_reduce({eigs[0], eigs[1], eigs[2], eigs[3]});
    std::printf("eigenvalues:");
    for (const cplx& z : eigs) std::printf(" %.12g%+.12gi", z.real(), z.imag());
    std::printf("\n");
    std::printf("case=%s\n", to_string(r.kind));
    if (r.kind == ReductionCase::GeneralPosition) {
        std::printf("lambda=%.12g%+.12gi\n", r.lambda.real(), r.lambda.imag());
        std::printf("a=%.12g%+.12gi b=%.12g%+.12gi c=%.12g%+.12gi\n", r.a.real(), r.a.imag(),
                    r.b.real(), r.b.imag(), r.c.real(), r.c.imag());
        std::printf("permutation=%zu,%zu,%zu,%zu\n", r.permutation[0], r.permutation[1],
                    r.permutation[2], r.permutation[3]);
    }
    if (r.threshold_inconclusive) {
        std::printf("threshold_inconclusive=true\n");
        return 3;
    }
    return 0;
}

int cmd_witness_search(const GlobalOpts& g, const std::string& target_arg,
                       const std::string& matrix_arg, std::size_t trials) {
    const ComplexMatrix t = resolve_matrix(target_arg);
    const ComplexMatrix x = resolve_matrix(matrix_arg);
    const WitnessSearchResult r = noncontractive_witness_search(t, x, trials, g.seed);
    if (!r.found) {
        std::printf("found=false attempts=%zu\n", r.attempts);
        return 1;
    }
    std::printf("found=true attempts=%zu excess=%.12g\n", r.attempts, r.excess);
    std::printf("a=%.12g%+.12gi b=%.12g%+.12gi c=%.12g%+.12gi\n", r.a.real(), r.a.imag(),
                r.b.real(), r.b.imag(), r.c.real(), r.c.imag());
    std::printf("lhs=%.12g rhs=%.12g\n", r.lhs, r.rhs);
    return 0;
}

int cmd_probe_conjecture(const GlobalOpts& g, const std::string& matrix_arg,
                         std::size_t trials) {
    const ComplexMatrix x = resolve_matrix(matrix_arg);
    const ConjectureReport r = conjecture_probe(x, trials, g.seed);
    std::printf("tested=%zu violations=%zu\n", r.tested, r.violations.size());
    for (const ProbeViolation& v : r.violations)
        std::printf("  violation: lambda_min=%.12g (B is %zux%zu)\n", v.lambda_min,
                    v.B.rows(), v.B.cols());
    return r.violations.empty() ? 0 : 1;
}

int cmd_verify_paper(const GlobalOpts& g, const std::string& filter, const std::string& format,
                     const std::string& out_path) {
    if (!out_path.empty() && format != "json" && format != "csv")
        throw DomainError("verify-paper: --format must be json or csv");
    const std::vector<FixtureResult> results = run_fixture_suite(filter, g.threads);
    std::size_t passed = 0;
    for (const FixtureResult& r : results) {
        std::printf("%-28s %s  (%ld ms)\n", r.fixture_id.c_str(), r.pass ? "PASS" : "FAIL",
                    static_cast<long>(r.runtime_ms));
        if (!r.pass) {
            std::printf("    observed: %s\n", r.observed.c_str());
            std::printf("    expected: %s\n", r.expected.c_str());
        }
        if (r.pass) ++passed;
    }
    std::printf("%zu/%zu fixtures passed\n", passed, results.size());
    if (!out_path.empty()) {
        export_report(results, format, out_path);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return passed == results.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrange: positivity, dilation, and matricial-range toolkit for small "
                 "complex matrices"};
    app.require_subcommand(0, 1);

    GlobalOpts g;
    app.add_option("--tol", g.tol, "positivity tolerance")->capture_default_str();
    app.add_option("--grid", g.grid, "angle-grid size for sweeps")->capture_default_str();
    app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    bool list_named = false;
    app.add_flag("--list-named", list_named, "print the built-in matrix ids and exit");
    app.fallthrough();

    std::string matrix_arg, target_arg = "j3", b1_arg, b2_arg, out_path, method = "auto";
    std::string filter, format = "json";
    bool csv = false;
    std::size_t trials_membership = 2000, trials_witness = 10000, trials_probe = 1000;

    CLI::App* c_psd = app.add_subcommand("check-psd", "PSD verdict with lambda_min margin");
    c_psd->add_option("--matrix", matrix_arg, "matrix id or JSON path")->required();

    CLI::App* c_num = app.add_subcommand(
        "numrange", "numerical-range boundary points (use --csv for theta,re,im output)");
    c_num->add_option("--matrix", matrix_arg, "matrix id or JSON path")->required();
    c_num->add_flag("--csv", csv, "emit CSV: theta,re,im at 17 significant digits");
    c_num->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* c_rad = app.add_subcommand("radius", "numerical radius");
    c_rad->add_option("--matrix", matrix_arg, "matrix id or JSON path")->required();

    CLI::App* c_mem = app.add_subcommand(
        "membership", "matricial-range membership of X for the 3x3 Jordan target");
    c_mem->add_option("--matrix", matrix_arg, "candidate 2x2/3x3 matrix")->required();
    c_mem->add_option("--target", target_arg, "target matrix (must be j3)")
        ->capture_default_str();
    c_mem->add_option("--trials", trials_membership, "probe trials when inconclusive")
        ->capture_default_str();

    CLI::App* c_dil = app.add_subcommand("dilate", "boundary dilation (JSON result)");
    c_dil->add_option("--matrix", matrix_arg, "matrix id or JSON path")->required();
    c_dil->add_option("--method", method, "auto | m2 | doubling")->capture_default_str();
    c_dil->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* c_ext = app.add_subcommand(
        "extreme-classify", "classify a Hermitian pair (B1,B2) with B1^2+B2^2 <= I");
    c_ext->add_option("--b1", b1_arg, "first Hermitian matrix")->required();
    c_ext->add_option("--b2", b2_arg, "second Hermitian matrix")->required();

    CLI::App* c_red = app.add_subcommand(
        "reduce-normal", "canonical-form reduction for a 4x4 normal matrix");
    c_red->add_option("--matrix", matrix_arg, "4x4 normal matrix")->required();

    CLI::App* c_wit = app.add_subcommand(
        "witness-search", "search for coefficients where X breaks contractivity vs T");
    c_wit->add_option("--matrix", matrix_arg, "candidate matrix X")->required();
    c_wit->add_option("--target", target_arg, "target matrix T")->capture_default_str();
    c_wit->add_option("--trials", trials_witness, "search trials")->capture_default_str();

    CLI::App* c_pro = app.add_subcommand(
        "probe-conjecture", "random-B probe of the criterion=>positivity implication");
    c_pro->add_option("--matrix", matrix_arg, "criterion-passing matrix X")->required();
    c_pro->add_option("--trials", trials_probe, "probe trials")->capture_default_str();

    CLI::App* c_ver = app.add_subcommand("verify-paper", "run the pinned fixture suite");
    c_ver->add_option("--filter", filter, "substring/glob filter on fixture ids");
    c_ver->add_option("--format", format, "report format: json | csv")->capture_default_str();
    c_ver->add_option("--out", out_path, "report file path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (list_named) {
        for (const std::string& id : named_matrix_ids()) std::printf("%s\n", id.c_str());
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::fprintf(stderr, "%s\n", app.help().c_str());
        return 2;
    }

    if (const char* env = std::getenv("OPSYS_RANGE_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0') g.threads = static_cast<std::size_t>(v);
    }

    try {
        if (c_psd->parsed()) return cmd_check_psd(g, matrix_arg);
        if (c_num->parsed()) return cmd_numrange(g, matrix_arg, csv, out_path);
        if (c_rad->parsed()) return cmd_radius(g, matrix_arg);
        if (c_mem->parsed()) return cmd_membership(g, target_arg, matrix_arg, trials_membership);
        if (c_dil->parsed()) return cmd_dilate(matrix_arg, method, out_path);
        if (c_ext->parsed()) return cmd_extreme_classify(b1_arg, b2_arg);
        if (c_red->parsed()) return cmd_reduce_normal(g, matrix_arg);
        if (c_wit->parsed()) return cmd_witness_search(g, target_arg, matrix_arg, trials_witness);
        if (c_pro->parsed()) return cmd_probe_conjecture(g, matrix_arg, trials_probe);
        if (c_ver->parsed()) return cmd_verify_paper(g, filter, format, out_path);
    } catch (const CriterionViolated& e) {
        std::fprintf(stderr, "verdict: %s\n", e.what());
        return 1;
    } catch (const ConstraintViolated& e) {
        std::fprintf(stderr, "verdict: %s\n", e.what());
        return 1;
    } catch (const RadiusExceeded& e) {
        std::fprintf(stderr, "verdict: %s\n", e.what());
        return 1;
    } catch (const NotOnBoundary& e) {
        std::fprintf(stderr, "verdict: %s\n", e.what());
        return 1;
    } catch (const DimensionMismatch& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const DimensionOverflow& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const NonHermitianInput& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const OddDimension& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 2;
}
