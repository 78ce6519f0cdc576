// Generates a small synthetic coupled network, fuses cosine preference with
// RWR influence and prints the accuracy of a few (alpha, beta) settings.

#include <cstdio>

#include "csn/csn.hpp"

int main() {
    csn::SynthConfig cfg;
    cfg.users = 300;
    cfg.items = 600;
    cfg.copy_prob = 0.8;
    const auto net = csn::generate(cfg);
    const auto sp = csn::split(net, 0.9, 42);

    const auto preference = csn::cosine_preference(sp.train);
    const auto influence = csn::rwr_influence(sp.train);

    csn::SweepOptions opt;
    opt.auc_samples = 100000;
    const auto samples = csn::draw_auc_samples(sp.train, sp.test, opt.auc_samples, 7);
    for (const auto [alpha, beta] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {2.0, 0.4}}) {
        const auto eval = csn::evaluate_point(sp, preference, influence, alpha, beta, {10}, samples, opt);
        const auto& r = eval.reports.front();
        std::printf("alpha=%.1f beta=%.1f  P=%.4f R=%.4f F=%.4f AUC=%.4f\n", alpha, beta,
                    r.precision, r.recall, r.fmeasure, r.auc);
    }
}
