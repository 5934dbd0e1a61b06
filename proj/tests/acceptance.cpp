// Acceptance suite: the full battery at the pinned parameters (seed 42,
// 200 instances, dimension <= 8). Prints one PASS/FAIL line per criterion
// and exits nonzero if any fails. argv[1] must be the opkit binary, used
// by the tamper-detection and determinism criteria.

#include "opkit/gen.hpp"
#include "opkit/io.hpp"
#include "opkit/props.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace opkit;

constexpr std::uint64_t kSeed = 42;
constexpr std::uint64_t kTrials = 200;
constexpr std::size_t kMaxDim = 8;

std::string g_opkit_bin;

struct Criterion {
    int number;
    std::string title;
    std::function<std::string()> run; // empty string = pass, else failure detail
};

GenProfile matrix_profile(std::uint64_t trial) {
    GenProfile p;
    p.max_dim = kMaxDim;
    p.max_block = 4;
    p.invertible_weight = 1;
    p.nilpotent_weight = 2;
    p.seed = Splitmix64::stream(kSeed, trial).next();
    return p;
}

GenProfile tree_profile(std::uint64_t trial) {
    GenProfile p = matrix_profile(trial ^ 0x5BF0363546A4CB01ULL);
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = fs::temp_directory_path() /
                         ("opkit_acc_out_" + std::to_string(counter++) + ".txt");
    const std::string cmd =
        "'" + g_opkit_bin + "' " + args + " > '" + out.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    r.out = os.str();
    fs::remove(out);
    return r;
}

std::string criterion_kato_vs_fitting() {
    for (std::uint64_t t = 0; t < kTrials; ++t) {
        const GeneratedMatrix gm = gen_matrix(matrix_profile(t));
        const KatoCertificate cert = kato_decompose(gm.matrix);
        const auto [m, n] = fitting_oracle(gm.matrix);
        if (cert.core != m || cert.nilpotent != n)
            return "trial " + std::to_string(t) + ": decomposition differs from the oracle";
    }
    return "";
}

std::string criterion_side_conditions() {
    for (std::uint64_t t = 0; t < kTrials; ++t) {
        const GeneratedMatrix gm = gen_matrix(matrix_profile(t));
        const KatoCertificate cert = kato_decompose(gm.matrix);
        const VerifyReport rep = verify_certificate(gm.matrix, cert);
        for (const CheckResult& c : rep.checks)
            if (!c.pass)
                return "trial " + std::to_string(t) + ": check '" + c.name + "' failed";
        const InvariantReport inv = analyze_matrix(gm.matrix);
        if (ExtNat(cert.k) != inv.jump.value())
            return "trial " + std::to_string(t) + ": k differs from jump";
        if (cert.k > 0) {
            const std::size_t m_t = inv.m_t.finite_value();
            if (cert.d + (cert.k - 1) * m_t > cert.nilpotent.dim() ||
                cert.nilpotent.dim() > cert.k * cert.d)
                return "trial " + std::to_string(t) + ": dimension bounds fail";
        }
    }
    return "";
}

std::string criterion_dis_equals_v() {
    for (std::uint64_t t = 0; t < kTrials; ++t) {
        const GeneratedMatrix gm = gen_matrix(matrix_profile(t));
        const InvariantReport rep = analyze_matrix(gm.matrix);
        const bool invertible = rep.alpha.at(0) == ExtNat(0);
        if (!invertible && rep.dis != rep.v)
            return "trial " + std::to_string(t) + ": dis != v";
        if (rep.flags.nilpotent) {
            const std::size_t deg = rep.dis.finite_value();
            if (!matrix_power(gm.matrix, deg).is_zero())
                return "trial " + std::to_string(t) + ": T^dis is not zero on a nilpotent";
            if (deg > 0 && matrix_power(gm.matrix, deg - 1).is_zero())
                return "trial " + std::to_string(t) + ": nilpotency degree below dis";
        }
    }
    return "";
}

std::string criterion_sequence_identities() {
    for (std::uint64_t t = 0; t < kTrials; ++t) {
        const GeneratedMatrix gm = gen_matrix(matrix_profile(t));
        const IterLattice lat = iterate(gm.matrix);
        const EcSeq alpha = alpha_seq(lat);
        const EcSeq beta = beta_seq(lat);
        const auto ks = k_seq(alpha);
        const InvariantReport rep = analyze_matrix(gm.matrix);
        for (std::size_t n = 0; n <= lat.stab + 2; ++n) {
            const ExtNat k_n = n < ks.size() ? ks[n] : ExtNat(0);
            if (alpha.at(n) != alpha.at(n + 1) + k_n)
                return "trial " + std::to_string(t) + ": alpha recurrence fails";
        }
        for (std::size_t n = 1; n <= lat.stab + 2; ++n) {
            const PowerDims pd = predicted_power_dims(rep, n);
            const RatMatrix tn = lat.power_at(n);
            if (pd.alpha_n != ExtNat(kernel(tn).dim()) ||
                pd.beta_n != ExtNat(codim_image(tn)))
                return "trial " + std::to_string(t) + ": power closed form fails at n=" +
                       std::to_string(n);
        }
        for (std::size_t m = 1; m <= 3; ++m)
            for (std::size_t n = 0; n + m <= lat.stab + 2; ++n) {
                ExtNat expected(0);
                for (std::size_t i = n; i < n + m; ++i) expected = expected + beta.at(i);
                if (ExtNat(codim_image(snm_operator(gm.matrix, n, m))) != expected)
                    return "trial " + std::to_string(t) + ": pairing codimension fails";
            }
    }
    return "";
}

std::string criterion_duality() {
    for (std::uint64_t t = 0; t < kTrials; ++t) {
        const GeneratedMatrix gm = gen_matrix(matrix_profile(t));
        const InvariantReport rep = analyze_matrix(gm.matrix);
        const InvariantReport drep = analyze_matrix(dual(gm.matrix));
        if (rep.dis != drep.dis) return "trial " + std::to_string(t) + ": dis(T) != dis(T^t)";
        if (drep.alpha != rep.beta || drep.beta != rep.alpha)
            return "trial " + std::to_string(t) + ": transpose sequences disagree";
    }
    return "";
}

std::string criterion_atom_calculus() {
    for (std::uint64_t t = 0; t < kTrials; ++t) {
        const GeneratedTree gt = gen_atom_tree(tree_profile(t));
        const InvariantReport rep = symbolic_invariants(gt.tree);
        if (!rep.jump || !rep.index)
            return "trial " + std::to_string(t) + ": jump or index undefined";
        for (std::uint64_t n = 1; n <= 4; ++n) {
            const InvariantReport prep =
                symbolic_invariants(normalize(AtomTree::power(gt.tree, n)));
            if (prep.index.value() != static_cast<std::int64_t>(n) * rep.index.value())
                return "trial " + std::to_string(t) + ": index power law fails at n=" +
                       std::to_string(n);
        }
        const ClassificationFlags& f = rep.flags;
        if (f.fredholm != (f.upper_semi_fredholm && f.lower_semi_b_fredholm) ||
            f.fredholm != (f.lower_semi_fredholm && f.upper_semi_b_fredholm))
            return "trial " + std::to_string(t) + ": Fredholm equivalences fail";
        if ((rep.jump.value() == ExtNat(0)) != (rep.dis == rep.m_t))
            return "trial " + std::to_string(t) + ": jump/stability equivalence fails";
        if (rep.a_e.is_finite() && rep.d_e.is_finite() &&
            (rep.m_t != rep.a_e || rep.m_t != rep.d_e))
            return "trial " + std::to_string(t) + ": essential degrees disagree";
        const SymbolicKatoReport kato = symbolic_kato(gt.tree);
        if (kato.index_total != kato.index_core)
            return "trial " + std::to_string(t) + ": index not preserved by the core";
    }
    return "";
}

std::string criterion_finite_symbolic_consistency() {
    std::size_t finite_only = 0;
    for (std::uint64_t t = 0; t < kTrials; ++t) {
        const GeneratedTree gt = gen_atom_tree(tree_profile(t));
        if (!gt.record.finite_only()) continue;
        ++finite_only;
        const auto [alpha, beta] = symbolic_sequences(gt.tree);
        const IterLattice lat = iterate(assemble_finite(gt.tree));
        if (alpha != alpha_seq(lat) || beta != beta_seq(lat))
            return "trial " + std::to_string(t) + ": symbolic and assembled sequences differ";
    }
    if (finite_only == 0) return "corpus contained no finite-only trees";
    return "";
}

std::string criterion_tamper_detection() {
    const fs::path dir = fs::temp_directory_path();
    const fs::path op = dir / "opkit_acc_op.json";
    const fs::path wrong_op = dir / "opkit_acc_wrong.json";
    const fs::path cert = dir / "opkit_acc_cert.json";
    const RatMatrix t = block_diag({RatMatrix::jordan_block(2), RatMatrix{{2}}});
    std::ofstream(op, std::ios::binary) << matrix_document(t).dump(2);
    RatMatrix cyc(3, 3);
    cyc.at(1, 0) = 1;
    cyc.at(2, 1) = 1;
    cyc.at(0, 2) = 1;
    std::ofstream(wrong_op, std::ios::binary) << matrix_document(cyc).dump(2);

    const RunResult dec = run_cli("decompose '" + op.string() + "' -o '" + cert.string() + "'");
    if (dec.exit_code != 0) return "decompose failed";
    const std::string pristine = [&] {
        std::ifstream in(cert, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }();

    // vector dropped -> direct-sum named
    {
        json j = json::parse(pristine);
        j["N_basis"].erase(1);
        std::ofstream(cert, std::ios::binary) << j.dump(2);
        const RunResult v = run_cli("verify '" + op.string() + "' '" + cert.string() + "'");
        if (v.exit_code != 1 || v.out.find("direct-sum") == std::string::npos)
            return "dropped-vector tamper not caught by the direct-sum check";
    }
    // degree inflated -> nilpotency-degree named
    {
        json j = json::parse(pristine);
        j["d"] = j["d"].get<std::size_t>() + 1;
        std::ofstream(cert, std::ios::binary) << j.dump(2);
        const RunResult v = run_cli("verify '" + op.string() + "' '" + cert.string() + "'");
        if (v.exit_code != 1 || v.out.find("nilpotency-degree") == std::string::npos)
            return "inflated-degree tamper not caught by the nilpotency-degree check";
    }
    // wrong operator -> invariance named
    {
        std::ofstream(cert, std::ios::binary) << pristine;
        const RunResult v = run_cli("verify '" + wrong_op.string() + "' '" + cert.string() + "'");
        if (v.exit_code != 1 || v.out.find("invariance") == std::string::npos)
            return "wrong-operator verification not caught by the invariance check";
    }
    fs::remove(op);
    fs::remove(wrong_op);
    fs::remove(cert);
    return "";
}

std::string criterion_determinism() {
    const std::string args = "props --seed 42 --trials 200 --max-dim 8";
    const RunResult first = run_cli(args);
    if (first.exit_code != 0) return "props run failed:\n" + first.out;
    const RunResult second = run_cli(args);
    if (second.exit_code != 0) return "second props run failed";
    if (first.out != second.out) return "outputs differ between runs";
    return "";
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-opkit>\n");
        return 2;
    }
    g_opkit_bin = argv[1];

    const std::vector<Criterion> criteria = {
        {1, "kato vs fitting oracle equivalence (200 matrices, seed 42, exact)",
         criterion_kato_vs_fitting},
        {2, "decomposition side conditions on the corpus", criterion_side_conditions},
        {3, "dis = v off the invertibles; dis = nilpotency degree", criterion_dis_equals_v},
        {4, "sequence identities and power closed forms", criterion_sequence_identities},
        {5, "transpose duality of sequences and dis", criterion_duality},
        {6, "atom calculus batteries (200 trees, seed 42)", criterion_atom_calculus},
        {7, "finite-only trees match assembled block matrices",
         criterion_finite_symbolic_consistency},
        {8, "certificate tamper detection via the cli (3 cases)", criterion_tamper_detection},
        {9, "byte-identical props output across runs", criterion_determinism},
    };

    bool all = true;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            failure = c.run();
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.number == 1 && failure.empty() && secs >= 60.0)
            failure = "exceeded the 60 s budget";
        if (failure.empty()) {
            std::printf("PASS  criterion %d: %s (%.2fs)\n", c.number, c.title.c_str(), secs);
        } else {
            all = false;
            std::printf("FAIL  criterion %d: %s (%.2fs) -- %s\n", c.number, c.title.c_str(),
                        secs, failure.c_str());
        }
    }
    std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILURES");
    return all ? 0 : 1;
}
