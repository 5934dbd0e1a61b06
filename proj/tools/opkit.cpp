// opkit: exact invariants and Kato-type decompositions of rational
// matrices and symbolic direct sums of shift/zero/identity atoms.
//
// Exit codes: 0 success, 1 failed verification or failed property run,
// 2 unreadable/unparsable input, 3 semantically invalid input.

#include "opkit/atoms.hpp"
#include "opkit/invariants.hpp"
#include "opkit/io.hpp"
#include "opkit/kato.hpp"
#include "opkit/props.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#if defined(_WIN32)
#include <io.h>
#define OPKIT_ISATTY _isatty(_fileno(stdout))
#else
#include <unistd.h>
#define OPKIT_ISATTY isatty(fileno(stdout))
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitParseError = 2;
constexpr int kExitSemanticError = 3;

bool use_color() {
    if (std::getenv("OPKIT_NO_COLOR") != nullptr) return false;
    return OPKIT_ISATTY;
}

std::string paint(const std::string& text, const char* code) {
    if (!use_color()) return text;
    return std::string("\x1b[") + code + "m" + text + "\x1b[0m";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw opkit::FileParseError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw opkit::FileSemanticError("cannot write '" + path + "'");
    out << content;
}

std::string seq_str(const opkit::EcSeq& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.values().size(); ++i) {
        if (i) out += ", ";
        out += s.values()[i].str();
    }
    out += ", ...)"; // last value repeats
    return out;
}

void print_report_table(const opkit::InvariantReport& r) {
    const auto line = [](const std::string& name, const std::string& value) {
        std::printf("  %-22s %s\n", name.c_str(), value.c_str());
    };
    std::printf("%s\n",
                paint(r.kind == opkit::ReportKind::finite ? "finite operator report"
                                                          : "symbolic operator report",
                      "1")
                    .c_str());
    if (r.kind == opkit::ReportKind::finite) line("dimension", std::to_string(r.dim));
    line("alpha", seq_str(r.alpha));
    line("beta", seq_str(r.beta));
    std::string ks = "(";
    for (std::size_t i = 0; i < r.k.size(); ++i) {
        if (i) ks += ", ";
        ks += r.k[i].str();
    }
    line("k", ks + ")");
    line("dis", r.dis.str());
    line("v", r.v.str());
    line("m_T", r.m_t.str());
    line("a_e / d_e", r.a_e.str() + " / " + r.d_e.str());
    line("ascent / descent", r.ascent.str() + " / " + r.descent.str());
    line("jump", r.jump ? r.jump->str() : "undefined");
    line("index", r.index ? r.index->str() : "undefined");
    const opkit::ClassificationFlags& f = r.flags;
    const auto flag = [&](const char* name, bool value) {
        line(name, value ? paint("yes", "32") : "no");
    };
    flag("semi-regular", f.semi_regular);
    flag("quasi-Fredholm", f.quasi_fredholm);
    flag("upper semi-Fredholm", f.upper_semi_fredholm);
    flag("lower semi-Fredholm", f.lower_semi_fredholm);
    flag("upper semi-B-Fredholm", f.upper_semi_b_fredholm);
    flag("lower semi-B-Fredholm", f.lower_semi_b_fredholm);
    flag("semi-B-Fredholm", f.semi_b_fredholm);
    flag("B-Fredholm", f.b_fredholm);
    flag("Fredholm", f.fredholm);
    flag("Drazin invertible", f.drazin_invertible);
    flag("nilpotent", f.nilpotent);
    flag("ranges closed", f.ranges_closed);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact operator invariants over Q"};
    app.require_subcommand(1);

    std::string analyze_path;
    bool analyze_json = false;
    CLI::App* analyze = app.add_subcommand("analyze", "report all invariants of an operator");
    analyze->add_option("file", analyze_path, "operator document")->required();
    analyze->add_flag("--json", analyze_json, "emit the report as JSON");

    std::string dec_path, dec_out;
    bool dec_strict = false;
    CLI::App* decompose =
        app.add_subcommand("decompose", "compute a Kato-type decomposition certificate");
    decompose->add_option("file", dec_path, "operator document")->required();
    decompose->add_option("-o,--output", dec_out, "certificate output path")->required();
    decompose->add_flag("--strict-finite", dec_strict,
                        "reject operators that are not plain matrices");

    std::string ver_op_path, ver_cert_path;
    CLI::App* verify = app.add_subcommand("verify", "re-check a decomposition certificate");
    verify->add_option("operator", ver_op_path, "operator document")->required();
    verify->add_option("certificate", ver_cert_path, "certificate document")->required();

    std::uint64_t props_seed = 0;
    std::uint64_t props_trials = 100;
    std::size_t props_max_dim = 6;
    bool props_with_broken = false;
    CLI::App* props = app.add_subcommand("props", "run the seeded property batteries");
    props->add_option("--seed", props_seed, "base seed")->required();
    props->add_option("--trials", props_trials, "trials per property")->required();
    props->add_option("--max-dim", props_max_dim, "largest matrix dimension")->required();
    props->add_flag("--with-broken", props_with_broken,
                    "register a deliberately failing property (harness self-test)")
        ->group(""); // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitParseError;
    }

    try {
        if (*analyze) {
            const opkit::OperatorSpec spec = opkit::parse_operator_text(read_file(analyze_path));
            opkit::InvariantReport report;
            if (spec.finite_fast_path) {
                report = opkit::analyze_matrix(spec.tree.matrix);
            } else {
                report = opkit::symbolic_invariants(opkit::normalize(spec.tree));
            }
            if (analyze_json) {
                std::printf("%s\n", opkit::report_to_json(report).dump(2).c_str());
            } else {
                print_report_table(report);
            }
            return kExitOk;
        }

        if (*decompose) {
            const opkit::OperatorSpec spec = opkit::parse_operator_text(read_file(dec_path));
            if (spec.finite_fast_path) {
                const opkit::KatoCertificate cert = opkit::kato_decompose(spec.tree.matrix);
                write_file(dec_out, opkit::certificate_to_json(cert).dump(2) + "\n");
                std::printf("kato certificate: dim M = %zu, dim N = %zu, d = %zu, k = %zu\n",
                            cert.core.dim(), cert.nilpotent.dim(), cert.d, cert.k);
                return kExitOk;
            }
            if (dec_strict)
                throw opkit::FileSemanticError(
                    "--strict-finite: operator document is not a plain matrix");
            const opkit::AtomTree tree = opkit::normalize(spec.tree);
            const opkit::SymbolicKatoReport rep = opkit::symbolic_kato(tree);
            write_file(dec_out, opkit::symbolic_kato_to_json(rep).dump(2) + "\n");
            std::printf("symbolic (structural) decomposition: d = %zu, dim N = %s%s\n", rep.d,
                        rep.nilpotent_dim.str().c_str(),
                        rep.dim_n_finite ? ""
                                         : " [outside the finite-dimensional-N guarantee]");
            return kExitOk;
        }

        if (*verify) {
            const opkit::OperatorSpec spec = opkit::parse_operator_text(read_file(ver_op_path));
            if (!spec.finite_fast_path)
                throw opkit::FileSemanticError(
                    "verify needs a plain matrix operator document");
            opkit::json cert_doc;
            try {
                cert_doc = opkit::json::parse(read_file(ver_cert_path));
            } catch (const opkit::json::parse_error& e) {
                throw opkit::FileParseError(std::string("certificate: invalid JSON: ") +
                                            e.what());
            }
            const opkit::KatoCertificate cert = opkit::certificate_from_json(cert_doc);
            const opkit::VerifyReport rep =
                opkit::verify_certificate(spec.tree.matrix, cert);
            bool all = true;
            for (const opkit::CheckResult& c : rep.checks) {
                if (c.pass) {
                    std::printf("%s %s\n", paint("ok  ", "32").c_str(), c.name.c_str());
                } else {
                    all = false;
                    std::printf("%s %s%s%s\n", paint("FAIL", "31").c_str(), c.name.c_str(),
                                c.detail.empty() ? "" : ": ",
                                c.detail.c_str());
                }
            }
            std::printf("%s\n", all ? "certificate verified" : "certificate rejected");
            return all ? kExitOk : kExitCheckFailed;
        }

        if (*props) {
            std::vector<opkit::Property> batteries = opkit::all_properties();
            if (props_with_broken) {
                batteries.push_back({"selftest-broken",
                                     [](std::uint64_t, std::uint64_t, std::size_t) {
                                         return std::string("deliberate failure");
                                     }});
            }
            std::printf("props seed=%llu trials=%llu max-dim=%zu\n",
                        static_cast<unsigned long long>(props_seed),
                        static_cast<unsigned long long>(props_trials), props_max_dim);
            if (props_trials == 0) std::printf("warning: 0 trials, results are vacuous\n");
            const opkit::PropRunSummary summary =
                opkit::run_properties(batteries, props_seed, props_trials, props_max_dim);
            for (const auto& line : summary.lines) {
                std::printf("  %-28s %llu/%llu\n", line.name.c_str(),
                            static_cast<unsigned long long>(line.passed),
                            static_cast<unsigned long long>(line.ran));
            }
            for (const auto& line : summary.lines)
                if (!line.first_failure.empty())
                    std::printf("FAIL %s\n", line.first_failure.c_str());
            std::printf("%s\n", summary.all_pass ? "all properties passed"
                                                 : "property failures detected");
            return summary.all_pass ? kExitOk : kExitCheckFailed;
        }
    } catch (const opkit::FileParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitParseError;
    } catch (const opkit::FileSemanticError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSemanticError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSemanticError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitSemanticError;
    }
    return kExitOk;
}
