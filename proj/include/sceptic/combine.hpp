#pragma once

namespace sceptic {

enum class CombineMethod { TWO_TRIALS, FISHER, STOUFFER, PEARSON };

struct CombinedVerdict {
    CombineMethod method;
    double statistic;
    // Probability on the alpha^2 scale; success means it does not exceed
    // alpha^2, which gives every method exact overall size alpha^2 under the
    // intersection null.
    double p_overall_scale;

    bool success_at(double alpha) const { return p_overall_scale <= alpha * alpha; }
};

CombinedVerdict two_trials(double p_o, double p_r);
CombinedVerdict combine(CombineMethod method, double p_o, double p_r);

// Supremum of Pearson's partial Type-I error rate over the union null.
double pearson_partial_bound(double alpha);

}  // namespace sceptic
