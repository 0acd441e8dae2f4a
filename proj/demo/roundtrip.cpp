// Decompose a random unitary into angles and phases, print them, and
// rebuild the matrix.
//
//   unirec_demo [n] [seed]

#include <cstdio>
#include <cstdlib>

#include "unirec/unirec.hpp"

namespace {

void print_angles(const char* label, const std::vector<double>& xs) {
    std::printf("  %-7s", label);
    for (double x : xs) std::printf(" % .6f", x);
    std::printf("\n");
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 4;
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;
    if (n < 1) {
        std::fprintf(stderr, "n must be at least 1\n");
        return 2;
    }

    const unirec::ComplexMatrix x = unirec::haar_unitary(n, seed);
    const unirec::ParameterSet p = unirec::decompose(x);

    std::printf("%zu x %zu Haar unitary, seed %llu: %zu real parameters\n", n, n,
                static_cast<unsigned long long>(seed), unirec::parameter_count(n, unirec::CountScope::X));
    print_angles("alpha", p.alpha);
    print_angles("beta", p.beta);
    for (const auto& level : p.levels) {
        std::printf("  level %zu  theta % .6f\n", level.j, level.theta);
        if (!level.coords.gammas.empty()) {
            print_angles("gammas", level.coords.gammas);
            print_angles("deltas", level.coords.deltas);
        }
    }

    const unirec::ComplexMatrix rebuilt = unirec::compose(p);
    std::printf("reconstruction error (Frobenius): %.3e\n", unirec::frobenius_distance(rebuilt, x));
    std::printf("unitarity deviation of rebuilt:   %.3e\n", unirec::unitarity_deviation(rebuilt));
    return 0;
}
