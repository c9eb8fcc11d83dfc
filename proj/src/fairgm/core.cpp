#include "fairgm/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

namespace fairgm {

std::string model_name(Model m) {
    switch (m) {
        case Model::GLasso: return "glasso";
        case Model::CovGraph: return "covgraph";
        case Model::BinNet: return "binnet";
    }
    return "?";
}

std::string penalty_name(Penalty p) {
    switch (p) {
        case Penalty::Square: return "square";
        case Penalty::Exp: return "exp";
        case Penalty::Abs: return "abs";
    }
    return "?";
}

void FitConfig::validate() const {
    if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
    if (!(tau > 0.0)) throw InvalidArgument("tau must be > 0");
    if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be >= 0");
    if (!(ell0 > 0.0)) throw InvalidArgument("ell0 must be > 0");
    if (!(ell_growth > 1.0)) throw InvalidArgument("ell_growth must be > 1");
    if (!(ell_shrink > 0.0)) throw InvalidArgument("ell_shrink must be > 0");
    if (!(eps > 0.0)) throw InvalidArgument("eps must be > 0");
    if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
}

Matrix GroupedDataset::group_rows(int k) const {
    if (k < 0 || k >= num_groups) throw InvalidArgument("group index out of range");
    Matrix out(group_sizes[k], data.cols());
    long r = 0;
    for (long i = 0; i < data.rows(); ++i) {
        if (group_of_row[i] == k) out.row(r++) = data.row(i);
    }
    return out;
}

namespace {

GroupedDataset build_dataset(const Matrix& raw, const std::vector<int>& ids, int k,
                             bool require_binary) {
    if (raw.rows() < 2) throw InvalidArgument("dataset needs at least 2 rows");
    if (raw.cols() < 2) throw InvalidArgument("dataset needs at least 2 columns");
    if (!raw.allFinite()) throw InvalidArgument("dataset contains NaN or Inf entries");

    GroupedDataset ds;
    ds.data = raw;
    ds.group_of_row = ids;
    ds.num_groups = k;
    ds.group_sizes.assign(k, 0);
    for (int id : ids) ds.group_sizes[id]++;
    for (long sz : ds.group_sizes) {
        if (sz == 0) throw InvalidArgument("empty sensitive group after relabeling");
    }

    ds.binary = true;
    for (long i = 0; i < raw.size() && ds.binary; ++i) {
        const double v = raw.data()[i];
        if (v != 0.0 && v != 1.0) ds.binary = false;
    }
    if (require_binary && !ds.binary)
        throw InvalidArgument("Ising model requires all entries in {0, 1}");
    return ds;
}

}  // namespace

GroupedDataset validate_dataset(const Matrix& raw, const std::vector<long>& labels,
                                bool require_binary) {
    if (static_cast<long>(labels.size()) != raw.rows())
        throw InvalidArgument("labels length must equal the number of rows");
    std::map<long, int> remap;
    for (long lab : labels) remap.emplace(lab, 0);
    int next = 0;
    for (auto& kv : remap) kv.second = next++;
    std::vector<int> ids(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) ids[i] = remap.at(labels[i]);
    return build_dataset(raw, ids, next, require_binary);
}

GroupedDataset validate_dataset(const Matrix& raw, const std::vector<std::string>& labels,
                                bool require_binary) {
    if (static_cast<long>(labels.size()) != raw.rows())
        throw InvalidArgument("labels length must equal the number of rows");
    bool all_numeric = true;
    std::vector<long> numeric(labels.size());
    for (std::size_t i = 0; i < labels.size() && all_numeric; ++i) {
        const auto& s = labels[i];
        auto res = std::from_chars(s.data(), s.data() + s.size(), numeric[i]);
        all_numeric = res.ec == std::errc{} && res.ptr == s.data() + s.size();
    }
    if (all_numeric) return validate_dataset(raw, numeric, require_binary);

    std::map<std::string, int> remap;
    for (const auto& lab : labels) remap.emplace(lab, 0);
    int next = 0;
    for (auto& kv : remap) kv.second = next++;
    std::vector<int> ids(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) ids[i] = remap.at(labels[i]);
    return build_dataset(raw, ids, next, require_binary);
}

GroupStats group_stats(const GroupedDataset& ds) {
    GroupStats st;
    const long n = ds.n();
    st.pooled_cross = ds.data.transpose() * ds.data;
    st.pooled_S = st.pooled_cross / static_cast<double>(n);
    st.group_cross.reserve(ds.num_groups);
    st.group_S.reserve(ds.num_groups);
    for (int k = 0; k < ds.num_groups; ++k) {
        Matrix xk = ds.group_rows(k);
        Matrix cross = xk.transpose() * xk;
        st.group_S.push_back(cross / static_cast<double>(xk.rows()));
        st.group_cross.push_back(std::move(cross));
    }
    return st;
}

double penalty_value(Penalty p, double x) {
    switch (p) {
        case Penalty::Square: return 0.5 * x * x;
        case Penalty::Exp: return std::exp(x);
        case Penalty::Abs: return std::abs(x);
    }
    return 0.0;
}

double penalty_slope(Penalty p, double x) {
    switch (p) {
        case Penalty::Square: return x;
        case Penalty::Exp: return std::exp(x);
        case Penalty::Abs:
            throw UnsupportedPenaltyGradient("abs penalty is evaluation-only");
    }
    return 0.0;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("FAIRGM_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) hw = std::min<long>(hw, v);
    }
    return hw;
}

}  // namespace fairgm
