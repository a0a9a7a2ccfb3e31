#include "nucfw/data_io.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "nucfw/log.hpp"

namespace nucfw {

namespace {

template <typename T>
void fisher_yates(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

std::vector<std::string> split_fields(const std::string& line,
                                      const std::string& sep) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + sep.size();
  }
  return fields;
}

long parse_long(const std::string& s, bool& ok) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  ok = end != s.c_str() && *end == '\0' && !s.empty();
  return v;
}

double parse_double(const std::string& s, bool& ok) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  ok = end != s.c_str() && *end == '\0' && !s.empty();
  return v;
}

struct SplitTriplets {
  std::vector<Triplet> train, validation, test;
};

// 50/25/25 with the training split taking the rounding remainder.
SplitTriplets split_triplets(const Observations& obs, std::uint64_t seed) {
  const std::size_t count = obs.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  fisher_yates(order, rng);

  const std::size_t n_val = count / 4;
  const std::size_t n_test = count / 4;
  const std::size_t n_train = count - n_val - n_test;

  SplitTriplets out;
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t e = order[k];
    const Triplet t{obs.row[e], obs.col[e], obs.value[e]};
    if (k < n_train)
      out.train.push_back(t);
    else if (k < n_train + n_val)
      out.validation.push_back(t);
    else
      out.test.push_back(t);
  }
  return out;
}

}  // namespace

MovieLensFormat movielens_format_from_string(const std::string& name) {
  if (name == "ml100k") return MovieLensFormat::Ml100k;
  if (name == "ml1m") return MovieLensFormat::Ml1m;
  throw std::invalid_argument("unknown MovieLens format: " + name);
}

Observations parse_movielens(const std::string& path,
                             MovieLensFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const std::string sep = format == MovieLensFormat::Ml100k ? "\t" : "::";

  // Keep-last per (user, item); map keys double as the sorted id sets.
  std::map<std::pair<long, long>, double> ratings;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line, sep);
    if (fields.size() < 3)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected user" + sep + "item" + sep +
                               "rating fields");
    bool ok_user = false, ok_item = false, ok_rating = false;
    const long user = parse_long(fields[0], ok_user);
    const long item = parse_long(fields[1], ok_item);
    const double rating = parse_double(fields[2], ok_rating);
    if (!ok_user || !ok_item || !ok_rating || user < 1 || item < 1)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": malformed record");
    const auto key = std::make_pair(user, item);
    if (auto it = ratings.find(key); it != ratings.end()) {
      log::warn("%s:%zu: duplicate rating for user %ld item %ld, keeping last",
                path.c_str(), line_no, user, item);
      it->second = rating;
    } else {
      ratings.emplace(key, rating);
    }
  }

  std::map<long, int> user_index, item_index;
  for (const auto& [key, value] : ratings) {
    user_index.emplace(key.first, 0);
    item_index.emplace(key.second, 0);
  }
  int next = 0;
  for (auto& [id, idx] : user_index) idx = next++;
  next = 0;
  for (auto& [id, idx] : item_index) idx = next++;

  std::vector<Triplet> entries;
  entries.reserve(ratings.size());
  for (const auto& [key, value] : ratings)
    entries.push_back(
        {user_index.at(key.first), item_index.at(key.second), value});
  return make_observations(static_cast<Index>(user_index.size()),
                           static_cast<Index>(item_index.size()),
                           std::move(entries));
}

double denormalize(const Dataset& data, double normalized_value) {
  return normalized_value * data.stddev + data.mean;
}

Dataset split_and_normalize(const Observations& obs, std::uint64_t seed) {
  if (obs.size() < 4)
    throw std::invalid_argument("split_and_normalize: need at least 4 entries");
  SplitTriplets split = split_triplets(obs, seed);

  double mean = 0.0;
  for (const Triplet& t : split.train) mean += t.value;
  mean /= static_cast<double>(split.train.size());
  double var = 0.0;
  for (const Triplet& t : split.train) {
    const double d = t.value - mean;
    var += d * d;
  }
  var /= static_cast<double>(split.train.size());
  const double stddev = std::sqrt(var);
  if (stddev == 0.0)
    throw std::runtime_error(
        "split_and_normalize: constant training values, zero deviation");

  auto normalize = [&](std::vector<Triplet>& entries) {
    for (Triplet& t : entries) t.value = (t.value - mean) / stddev;
  };
  normalize(split.train);
  normalize(split.validation);
  normalize(split.test);

  Dataset out;
  out.train = make_observations(obs.m, obs.n, std::move(split.train));
  out.validation = make_observations(obs.m, obs.n, std::move(split.validation));
  out.test = make_observations(obs.m, obs.n, std::move(split.test));
  out.mean = mean;
  out.stddev = stddev;
  return out;
}

DeltaSchedule delta_for(const Observations& train, int j) {
  if (train.size() == 0)
    throw std::invalid_argument("delta_for: empty training set");
  if (j < 0) throw std::invalid_argument("delta_for: j must be nonnegative");
  double ss = 0.0;
  for (double v : train.value) ss += v * v;
  DeltaSchedule out;
  out.j = j;
  out.mu = 2.0 + 0.2 * j;
  out.delta = out.mu * std::sqrt(ss);
  return out;
}

SyntheticProblem make_synthetic(Index m, Index n, Index true_rank,
                                double obs_fraction, double noise_std,
                                std::uint64_t seed) {
  if (true_rank < 1 || true_rank > std::min(m, n))
    throw std::invalid_argument("make_synthetic: invalid rank");
  if (!(obs_fraction > 0.0) || obs_fraction > 1.0)
    throw std::invalid_argument("make_synthetic: obs_fraction out of (0, 1]");
  if (noise_std < 0.0)
    throw std::invalid_argument("make_synthetic: negative noise_std");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(m, true_rank), b(n, true_rank);
  for (Index i = 0; i < m; ++i)
    for (Index k = 0; k < true_rank; ++k) a(i, k) = gauss(rng);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < true_rank; ++k) b(i, k) = gauss(rng);

  // Exact thin SVD of A B^T from the small core; avoids densifying.
  Eigen::HouseholderQR<Matrix> qa(a), qb(b);
  const Matrix qau = qa.householderQ() * Matrix::Identity(m, true_rank);
  const Matrix qbu = qb.householderQ() * Matrix::Identity(n, true_rank);
  const Matrix ra =
      qa.matrixQR().topRows(true_rank).triangularView<Eigen::Upper>();
  const Matrix rb =
      qb.matrixQR().topRows(true_rank).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> core(ra * rb.transpose(),
                                Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = core.singularValues();
  const double sv_floor = 1e3 * std::numeric_limits<double>::epsilon() *
                          (sv.size() > 0 ? sv(0) : 0.0);
  Index keep = 0;
  while (keep < sv.size() && sv(keep) > sv_floor) ++keep;
  SyntheticProblem out;
  out.ground_truth =
      make_thin_svd(qau * core.matrixU().leftCols(keep), sv.head(keep),
                    qbu * core.matrixV().leftCols(keep));

  const std::size_t total = static_cast<std::size_t>(m * n);
  std::size_t count = static_cast<std::size_t>(
      std::llround(obs_fraction * static_cast<double>(total)));
  count = std::min(std::max<std::size_t>(count, 1), total);
  std::vector<std::size_t> cells(total);
  std::iota(cells.begin(), cells.end(), 0);
  fisher_yates(cells, rng);

  std::vector<Triplet> entries;
  entries.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const int i = static_cast<int>(cells[k] / static_cast<std::size_t>(n));
    const int j = static_cast<int>(cells[k] % static_cast<std::size_t>(n));
    double value = a.row(i).dot(b.row(j));
    if (noise_std > 0.0) value += noise_std * gauss(rng);
    entries.push_back({i, j, value});
  }
  const Observations all = make_observations(m, n, std::move(entries));

  SplitTriplets split = split_triplets(all, rng());
  out.data.train = make_observations(m, n, std::move(split.train));
  out.data.validation = make_observations(m, n, std::move(split.validation));
  out.data.test = make_observations(m, n, std::move(split.test));
  out.data.mean = 0.0;
  out.data.stddev = 1.0;
  out.data.name = "synthetic";
  return out;
}

}  // namespace nucfw
