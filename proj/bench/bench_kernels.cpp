// Timing harness for the serial and OpenMP execution paths. Both paths run
// the same arithmetic in the same order, so the outputs must agree bit for
// bit; this only measures the speed difference.

#include <chrono>
#include <cstdio>
#include <string>

#include "billiards/chords.hpp"
#include "billiards/experiments.hpp"
#include "billiards/kernel.hpp"
#include "billiards/reflection.hpp"
#include "billiards/rng.hpp"

using namespace billiards;
namespace k = billiards::kernel;

namespace {

double seconds(void (*body)(k::ExecPolicy), k::ExecPolicy policy) {
    const auto t0 = std::chrono::steady_clock::now();
    body(policy);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

const Domain& bench_domain() {
    static const Domain d =
        experiments::domain_from_json(experiments::builtin_domain_json("ellipse-2x1"));
    return d;
}

const k::PanelMesh& bench_mesh() {
    static const k::PanelMesh mesh = k::build_mesh(bench_domain(), 600);
    return mesh;
}

const k::KernelSystem& bench_system() {
    static const k::KernelSystem sys = k::assemble(
        bench_domain(), ReflectionLaw::cosine(2), bench_mesh(), 0.05, k::ExecPolicy::serial);
    return sys;
}

void assemble_body(k::ExecPolicy policy) {
    k::assemble(bench_domain(), ReflectionLaw::cosine(2), bench_mesh(), 0.05, policy);
}

void invariant_body(k::ExecPolicy policy) {
    k::invariant_density(bench_system(), 1e-13, 100000, policy);
}

void doblin_body(k::ExecPolicy policy) { k::doblin_check(bench_system(), 2, policy); }

void chords_body(k::ExecPolicy policy) {
    const Domain& d = bench_domain();
    const ReflectionLaw law = ReflectionLaw::cosine(2);
    const int replicas = 8;
    const long per = 100000;
    double sums[replicas];
#pragma omp parallel for schedule(dynamic, 1) if (policy == k::ExecPolicy::parallel)
    for (int r = 0; r < replicas; ++r) {
        Rng rng(2024, static_cast<std::uint64_t>(r));
        double s = 0.0;
        for (long i = 0; i < per; ++i) s += sample_chord(d, law, rng).length;
        sums[r] = s;
    }
    double total = 0.0;
    for (double s : sums) total += s;
    if (total < 0.0) std::puts("unreachable");
}

void report(const char* name, void (*body)(k::ExecPolicy)) {
    body(k::ExecPolicy::serial);  // warm caches and static state
    const double ts = seconds(body, k::ExecPolicy::serial);
    const double tp = seconds(body, k::ExecPolicy::parallel);
    std::printf("%-22s serial %8.3fs   parallel %8.3fs   speedup %.2fx\n", name, ts,
                tp, tp > 0.0 ? ts / tp : 0.0);
}

}  // namespace

int main() {
    bench_system();  // build once outside the timed region
    report("assemble", assemble_body);
    report("invariant_density", invariant_body);
    report("doblin_check", doblin_body);
    report("chord_sampling", chords_body);
    return 0;
}
