#include "corrsim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <string>

namespace corrsim {

void BivariateSample::validate() const {
    if (x.size() != y.size())
        throw SpecError("sample coordinate lengths differ");
    if (size() < 2)
        throw SpecError("sample needs at least 2 observations");
    for (std::size_t i = 0; i < size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw SpecError("non-finite value at row " + std::to_string(i));
    }
}

BivariateSample make_sample(const std::vector<std::pair<double, double>>& pairs) {
    BivariateSample s;
    s.reserve(pairs.size());
    for (const auto& [xi, yi] : pairs) s.push_back(xi, yi);
    return s;
}

ConcomitantSequence concomitants(const BivariateSample& sample) {
    sample.validate();
    const std::size_t n = sample.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sample.x[a] < sample.x[b]; });

    for (std::size_t j = 1; j < n; ++j) {
        if (sample.x[order[j - 1]] == sample.x[order[j]])
            throw TieError("duplicate x values", order[j - 1], order[j]);
    }

    ConcomitantSequence conc;
    conc.x_sorted.resize(n);
    conc.y_conc.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        conc.x_sorted[j] = sample.x[order[j]];
        conc.y_conc[j] = sample.y[order[j]];
    }
    return conc;
}

std::vector<int> sequential_ranks(const ConcomitantSequence& conc) {
    const std::size_t n = conc.size();
    std::vector<int> ranks(n >= 2 ? n - 1 : 0);
    for (std::size_t j = 1; j < n; ++j) {
        int count = 0;
        for (std::size_t i = 0; i < j; ++i) {
            if (conc.y_conc[i] == conc.y_conc[j])
                throw TieError("tied y values", i, j);
            if (conc.y_conc[i] <= conc.y_conc[j]) ++count;
        }
        ranks[j - 1] = count;
    }
    return ranks;
}

std::vector<int> full_ranks(const ConcomitantSequence& conc) {
    const std::size_t n = conc.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return conc.y_conc[a] < conc.y_conc[b];
    });
    for (std::size_t r = 1; r < n; ++r) {
        if (conc.y_conc[order[r - 1]] == conc.y_conc[order[r]])
            throw TieError("tied y values", order[r - 1], order[r]);
    }
    std::vector<int> ranks(n);
    for (std::size_t r = 0; r < n; ++r) ranks[order[r]] = static_cast<int>(r) + 1;
    return ranks;
}

RankVectors rank_vectors(const ConcomitantSequence& conc) {
    return RankVectors{sequential_ranks(conc), full_ranks(conc)};
}

double kendall_tau(const ConcomitantSequence& conc) {
    const std::size_t n = conc.size();
    const std::vector<int> seq = sequential_ranks(conc);
    std::uint64_t sum = 0;
    for (int r : seq) sum += static_cast<std::uint64_t>(r);
    const double pairs2 = static_cast<double>(n) * static_cast<double>(n - 1);
    return 4.0 * static_cast<double>(sum) / pairs2 - 1.0;
}

namespace {

std::uint64_t insertion_count(double* a, std::size_t len) {
    std::uint64_t inversions = 0;
    for (std::size_t i = 1; i < len; ++i) {
        const double v = a[i];
        std::size_t j = i;
        while (j > 0 && a[j - 1] > v) {
            a[j] = a[j - 1];
            --j;
        }
        inversions += i - j;
        a[j] = v;
    }
    return inversions;
}

std::uint64_t merge_count(double* a, double* buf, std::size_t len) {
    if (len < 32) return insertion_count(a, len);

    const std::size_t half = len / 2;
    std::uint64_t inversions = merge_count(a, buf, half);
    inversions += merge_count(a + half, buf + half, len - half);

    // Stable merge: a right element counts one inversion per remaining left
    // element only when strictly smaller, so equal values contribute nothing.
    std::size_t li = 0, ri = half, out = 0;
    while (li < half && ri < len) {
        if (a[ri] < a[li]) {
            buf[out++] = a[ri++];
            inversions += half - li;
        } else {
            buf[out++] = a[li++];
        }
    }
    while (li < half) buf[out++] = a[li++];
    while (ri < len) buf[out++] = a[ri++];
    std::memcpy(a, buf, len * sizeof(double));
    return inversions;
}

} // namespace

double kendall_tau_fast(const ConcomitantSequence& conc) {
    const std::size_t n = conc.size();
    std::vector<double> work(conc.y_conc);
    std::vector<double> buf(n);
    const std::uint64_t inversions = merge_count(work.data(), buf.data(), n);
    for (std::size_t r = 1; r < n; ++r) {
        if (work[r - 1] == work[r]) throw TieError("tied y values", r - 1, r);
    }
    const double pairs2 = static_cast<double>(n) * static_cast<double>(n - 1);
    return 1.0 - 4.0 * static_cast<double>(inversions) / pairs2;
}

double spearman_rho(const ConcomitantSequence& conc) {
    const std::size_t n = conc.size();
    const std::vector<int> ranks = full_ranks(conc);
    std::uint64_t sum_sq = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::int64_t d = static_cast<std::int64_t>(ranks[j]) -
                               (static_cast<std::int64_t>(j) + 1);
        sum_sq += static_cast<std::uint64_t>(d * d);
    }
    const double nn = static_cast<double>(n);
    return 1.0 - 6.0 * static_cast<double>(sum_sq) / (nn * nn * nn - nn);
}

double pearson_rho(const BivariateSample& sample) {
    sample.validate();
    const std::size_t n = sample.size();

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += sample.x[i];
        my += sample.y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = sample.x[i] - mx;
        const double dy = sample.y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw DegenerateError("x coordinate has zero variance");
    if (syy == 0.0) throw DegenerateError("y coordinate has zero variance");
    return sxy / std::sqrt(sxx * syy);
}

double mixed_coefficient(const ConcomitantSequence& conc) {
    return mixed_from(kendall_tau_fast(conc), spearman_rho(conc));
}

CoefficientSet coefficient_set(const BivariateSample& sample) {
    CoefficientSet out{};
    // Degeneracy first: a constant column would otherwise surface as a tie.
    out.pearson = pearson_rho(sample);
    const ConcomitantSequence conc = concomitants(sample);
    out.kendall = kendall_tau_fast(conc);
    out.spearman = spearman_rho(conc);
    out.mixed = mixed_from(out.kendall, out.spearman);
    return out;
}

} // namespace corrsim
