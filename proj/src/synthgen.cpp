#include "citemerge/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "citemerge/csv.hpp"
#include "citemerge/metrics.hpp"

namespace citemerge {

namespace {

// Fenwick tree over candidate weights; supports prefix sums and the inverse
// lookup needed for weighted sampling.
class FenwickTree {
 public:
  explicit FenwickTree(std::size_t n) : tree_(n + 1, 0.0) {}

  void add(std::size_t i, double delta) {
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }

  double total() const {
    double s = 0.0;
    for (std::size_t k = tree_.size() - 1; k > 0; k -= k & (~k + 1)) s += tree_[k];
    return s;
  }

  // Smallest index whose prefix sum exceeds `target`.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    std::size_t mask = 1;
    while (mask * 2 < tree_.size()) mask *= 2;
    for (; mask > 0; mask /= 2) {
      const std::size_t next = pos + mask;
      if (next < tree_.size() && tree_[next] <= target) {
        target -= tree_[next];
        pos = next;
      }
    }
    return pos;  // 0-based element index
  }

 private:
  std::vector<double> tree_;
};

struct ClusterKeyword {
  Cluster cluster;
  const char* keyword;
};

// Keywords mirror the starter rule file.
constexpr ClusterKeyword kClusterKeywords[kNamedClusterCount] = {
    {Cluster::Medicine, "surgery"},
    {Cluster::Science, "mathematics"},
    {Cluster::Biology, "genetics"},
    {Cluster::Engineering, "engineering"},
    {Cluster::SocialScience, "sociology"},
    {Cluster::Geography, "geography"},
    {Cluster::Arts, "arts"},
    {Cluster::ComputerScience, "computing"},
    {Cluster::Psychology, "psychology"},
    {Cluster::Management, "management"},
    {Cluster::LawAndPolicy, "law"},
    {Cluster::Building, "construction"},
    {Cluster::Education, "education"},
    {Cluster::CityDevelopment, "urban planning"},
};

void validate(const GenSpec& s) {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(s.overlap_fraction) || !prob(s.doi_present_prob) || !prob(s.coverage_a) ||
      !prob(s.coverage_b) || !prob(s.ref_doi_prob) || !prob(s.ref_title_prob) ||
      !prob(s.label_prob_a) || !prob(s.journal_keyword_prob))
    throw std::invalid_argument("generate: probabilities must lie in [0, 1]");
  if (s.year_lo > s.year_hi || s.year_lo < kMinYear || s.year_hi > kMaxYear)
    throw std::invalid_argument("generate: bad year range");
  if (s.mean_out_degree < 0.0) throw std::invalid_argument("generate: negative mean out-degree");
  if (s.pa_exponent < 0.0) throw std::invalid_argument("generate: negative attachment exponent");
  if (s.articles_per_journal == 0)
    throw std::invalid_argument("generate: articles_per_journal must be positive");
  const std::size_t overlap = static_cast<std::size_t>(
      std::llround(s.overlap_fraction * double(std::min(s.n_articles_a, s.n_articles_b))));
  if (overlap > std::min(s.n_articles_a, s.n_articles_b))
    throw std::invalid_argument("generate: overlap exceeds the smaller dataset");
}

void json_escape_into(std::string& out, const std::string& s) {
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
}

void append_field(std::string& out, const char* key, const std::string& value, bool& first) {
  if (!first) out += ',';
  first = false;
  out += '"';
  out += key;
  out += "\":\"";
  json_escape_into(out, value);
  out += '"';
}

struct Journal {
  std::string title;
  std::string issn;
  Cluster cluster;
};

}  // namespace

GenResult generate(const GenSpec& spec, const std::string& a_path, const std::string& b_path,
                   const std::string& manifest_path) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::size_t overlap = static_cast<std::size_t>(std::llround(
      spec.overlap_fraction * double(std::min(spec.n_articles_a, spec.n_articles_b))));
  const std::size_t universe = spec.n_articles_a + spec.n_articles_b - overlap;

  // Years ascending: article ids double as chronological order, so every true
  // reference points backwards in time.
  std::vector<int> years(universe);
  {
    std::uniform_int_distribution<int> year_dist(spec.year_lo, spec.year_hi);
    for (int& y : years) y = year_dist(rng);
    std::sort(years.begin(), years.end());
  }

  // Membership: shared first, then A-only, then B-only, over shuffled ids.
  std::vector<std::uint8_t> in_a(universe, 0), in_b(universe, 0);
  {
    std::vector<std::size_t> ids(universe);
    for (std::size_t i = 0; i < universe; ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    for (std::size_t i = 0; i < universe; ++i) {
      if (i < overlap) {
        in_a[ids[i]] = in_b[ids[i]] = 1;
      } else if (i < overlap + (spec.n_articles_a - overlap)) {
        in_a[ids[i]] = 1;
      } else {
        in_b[ids[i]] = 1;
      }
    }
  }

  // Journals with a true cluster each; some titles carry a cluster keyword.
  const std::size_t n_journals = std::max<std::size_t>(1, universe / spec.articles_per_journal);
  std::vector<Journal> journals(n_journals);
  {
    std::uniform_int_distribution<int> cluster_dist(0, kNamedClusterCount - 1);
    char issn[32];
    for (std::size_t j = 0; j < n_journals; ++j) {
      const ClusterKeyword& kw = kClusterKeywords[cluster_dist(rng)];
      journals[j].cluster = kw.cluster;
      if (unit(rng) < spec.journal_keyword_prob) {
        journals[j].title = "Journal of " + std::string(kw.keyword) + " " + std::to_string(j);
      } else {
        journals[j].title = "Miscellany Quarterly " + std::to_string(j);
      }
      std::snprintf(issn, sizeof(issn), "%04zu-%04zu", j / 10000, j % 10000);
      journals[j].issn = issn;
    }
  }
  std::vector<std::uint32_t> journal_of(universe);
  {
    std::uniform_int_distribution<std::size_t> jd(0, n_journals - 1);
    for (std::size_t i = 0; i < universe; ++i)
      journal_of[i] = static_cast<std::uint32_t>(jd(rng));
  }

  auto base_title = [](std::size_t id) { return "Study of Topic " + std::to_string(id); };
  auto doi_of = [](std::size_t id) { return "10.5555/art" + std::to_string(id); };
  auto raw_of = [&](std::size_t id) {
    return base_title(id) + " (" + std::to_string(years[id]) + ")";
  };

  // True reference lists via preferential attachment over earlier articles.
  std::vector<std::vector<std::uint32_t>> true_refs(universe);
  {
    FenwickTree weights(universe);
    std::vector<double> weight_of(universe, 0.0);
    std::vector<std::uint64_t> indegree(universe, 0);
    std::poisson_distribution<int> out_degree_dist(spec.mean_out_degree);
    auto weight = [&](std::size_t i) {
      return std::pow(static_cast<double>(indegree[i] + 1), spec.pa_exponent);
    };
    std::unordered_set<std::uint32_t> chosen;
    for (std::size_t i = 0; i < universe; ++i) {
      if (i > 0 && spec.mean_out_degree > 0.0) {
        const int want = std::min<int>(out_degree_dist(rng), static_cast<int>(i));
        chosen.clear();
        int attempts = want * 10 + 20;
        const double total = weights.total();
        while (static_cast<int>(chosen.size()) < want && attempts-- > 0 && total > 0.0) {
          const auto t = static_cast<std::uint32_t>(weights.find(unit(rng) * total));
          if (t >= i) continue;
          chosen.insert(t);
        }
        auto& refs = true_refs[i];
        refs.assign(chosen.begin(), chosen.end());
        std::sort(refs.begin(), refs.end());
        for (std::uint32_t t : refs) {
          ++indegree[t];
          const double w = weight(t);
          weights.add(t, w - weight_of[t]);
          weight_of[t] = w;
        }
      }
      weight_of[i] = weight(i);
      weights.add(i, weight_of[i]);
    }
  }

  // Per-dataset draws: record DOI presence, shipped label, kept references,
  // reference-entry field presence.
  struct RefCopy {
    std::uint32_t target;
    bool kept_a = false, kept_b = false;
    bool doi_a = false, doi_b = false;        // entry carries target DOI
    bool title_a = false, title_b = false;    // entry carries title+ISSN
  };
  std::vector<std::uint8_t> rec_doi_a(universe, 0), rec_doi_b(universe, 0), rec_label_a(universe, 0);
  std::vector<std::vector<RefCopy>> copies(universe);
  for (std::size_t i = 0; i < universe; ++i) {
    if (in_a[i]) {
      rec_doi_a[i] = unit(rng) < spec.doi_present_prob;
      rec_label_a[i] = unit(rng) < spec.label_prob_a;
    }
    if (in_b[i]) rec_doi_b[i] = unit(rng) < spec.doi_present_prob;
    copies[i].reserve(true_refs[i].size());
    for (std::uint32_t t : true_refs[i]) {
      RefCopy c;
      c.target = t;
      if (in_a[i] && unit(rng) < spec.coverage_a) {
        c.kept_a = true;
        c.doi_a = unit(rng) < spec.ref_doi_prob;
        c.title_a = unit(rng) < spec.ref_title_prob;
      }
      if (in_b[i] && unit(rng) < spec.coverage_b) {
        c.kept_b = true;
        c.doi_b = unit(rng) < spec.ref_doi_prob;
        c.title_b = unit(rng) < spec.ref_title_prob;
      }
      copies[i].push_back(c);
    }
  }

  // A reference entry resolves in the merged table when its DOI is carried by
  // some record of the target, or when it carries title+ISSN (records always
  // do, and all keys are unique by construction).
  auto doi_resolvable = [&](std::uint32_t t) {
    return (in_a[t] && rec_doi_a[t]) || (in_b[t] && rec_doi_b[t]);
  };

  GenResult result;
  result.manifest.reserve(universe);

  std::ofstream out_a(a_path, std::ios::binary), out_b(b_path, std::ios::binary);
  if (!out_a) throw std::runtime_error("cannot open output file: " + a_path);
  if (!out_b) throw std::runtime_error("cannot open output file: " + b_path);

  std::string line;
  auto emit_record = [&](std::ofstream& out, std::size_t i, DatasetTag tag) {
    const bool is_a = tag == DatasetTag::A;
    const Journal& journal = journals[journal_of[i]];
    line.clear();
    line += '{';
    bool first = true;
    append_field(line, "source_id", (is_a ? "a" : "b") + std::to_string(i), first);
    if (is_a ? rec_doi_a[i] : rec_doi_b[i]) append_field(line, "doi", doi_of(i), first);
    // The two datasets render the same title differently; matching relies on
    // normalization.
    append_field(line, "title", is_a ? base_title(i) : base_title(i) + ".", first);
    append_field(line, "issn", journal.issn, first);
    append_field(line, "journal_title", journal.title, first);
    line += ",\"year\":" + std::to_string(years[i]);
    if (is_a && rec_label_a[i])
      append_field(line, "cluster", std::string(to_string(journal.cluster)), first);
    line += ",\"references\":[";
    bool first_ref = true;
    std::size_t emitted = 0;
    for (const RefCopy& c : copies[i]) {
      const bool kept = is_a ? c.kept_a : c.kept_b;
      if (!kept) continue;
      if (!first_ref) line += ',';
      first_ref = false;
      line += '{';
      bool f2 = true;
      if (is_a ? c.doi_a : c.doi_b) append_field(line, "doi", doi_of(c.target), f2);
      if (is_a ? c.title_a : c.title_b) {
        append_field(line, "title", base_title(c.target), f2);
        append_field(line, "issn", journals[journal_of[c.target]].issn, f2);
      }
      append_field(line, "raw", raw_of(c.target), f2);
      line += '}';
      ++emitted;
    }
    line += "]}\n";
    out << line;
    (is_a ? result.reference_entries_a : result.reference_entries_b) += emitted;
    ++(is_a ? result.records_a : result.records_b);
  };

  for (std::size_t i = 0; i < universe; ++i) {
    GenManifestRow row;
    row.true_id = i;
    row.year = years[i];
    row.true_ref_count = static_cast<std::uint32_t>(true_refs[i].size());
    if (in_a[i]) {
      row.a_source_id = "a" + std::to_string(i);
      emit_record(out_a, i, DatasetTag::A);
    }
    if (in_b[i]) {
      row.b_source_id = "b" + std::to_string(i);
      emit_record(out_b, i, DatasetTag::B);
    }
    if (in_a[i] && in_b[i])
      row.expected_match = (rec_doi_a[i] && rec_doi_b[i]) ? "doi" : "title_issn";

    std::uint32_t resolved = 0, unresolved = 0;
    for (const RefCopy& c : copies[i]) {
      const bool res_a = c.kept_a && ((c.doi_a && doi_resolvable(c.target)) || c.title_a);
      const bool res_b = c.kept_b && ((c.doi_b && doi_resolvable(c.target)) || c.title_b);
      if (c.kept_a) ++row.a_ref_count;
      if (c.kept_b) ++row.b_ref_count;
      if (res_a || res_b) ++resolved;
      if ((c.kept_a && !res_a) || (c.kept_b && !res_b)) ++unresolved;
    }
    row.m_ref_count = resolved + unresolved;
    result.manifest.push_back(std::move(row));
  }
  out_a.close();
  out_b.close();
  if (out_a.fail()) throw std::runtime_error("error writing " + a_path);
  if (out_b.fail()) throw std::runtime_error("error writing " + b_path);

  CsvWriter manifest(manifest_path);
  manifest.row({"true_id", "a_source_id", "b_source_id", "year", "expected_match",
                "true_ref_count", "a_ref_count", "b_ref_count", "m_ref_count"});
  for (const GenManifestRow& r : result.manifest) {
    manifest.row({std::to_string(r.true_id), r.a_source_id, r.b_source_id,
                  std::to_string(r.year), r.expected_match, std::to_string(r.true_ref_count),
                  std::to_string(r.a_ref_count), std::to_string(r.b_ref_count),
                  std::to_string(r.m_ref_count)});
  }
  manifest.close();
  return result;
}

std::vector<GenManifestRow> read_manifest(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t c_id = t.column("true_id");
  const std::size_t c_a = t.column("a_source_id");
  const std::size_t c_b = t.column("b_source_id");
  const std::size_t c_year = t.column("year");
  const std::size_t c_match = t.column("expected_match");
  const std::size_t c_true = t.column("true_ref_count");
  const std::size_t c_ra = t.column("a_ref_count");
  const std::size_t c_rb = t.column("b_ref_count");
  const std::size_t c_rm = t.column("m_ref_count");
  std::vector<GenManifestRow> rows;
  rows.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    GenManifestRow row;
    row.true_id = std::stoull(r[c_id]);
    row.a_source_id = r[c_a];
    row.b_source_id = r[c_b];
    row.year = std::stoi(r[c_year]);
    row.expected_match = r[c_match];
    row.true_ref_count = static_cast<std::uint32_t>(std::stoul(r[c_true]));
    row.a_ref_count = static_cast<std::uint32_t>(std::stoul(r[c_ra]));
    row.b_ref_count = static_cast<std::uint32_t>(std::stoul(r[c_rb]));
    row.m_ref_count = static_cast<std::uint32_t>(std::stoul(r[c_rm]));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> oracle_asp(const CitationGraph& g, double damping, int window_years) {
  const std::size_t n = g.node_count();
  if (n > 2000) throw std::invalid_argument("oracle_asp: graph too large for a dense solve");
  if (!(damping > 0.0 && damping < 1.0))
    throw std::invalid_argument("oracle_asp: damping must be in (0, 1)");
  if (n == 0) return {};

  const WindowedCsr w = windowed_edges(g, window_years);
  // System matrix of x = (1-d) * 1 + d * M^T x, columns strictly diagonally
  // dominant for d < 1.
  std::vector<double> mat(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) mat[i * n + i] = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint32_t m_j = w.offsets[j + 1] - w.offsets[j];
    if (m_j == 0) continue;
    const double share = damping / static_cast<double>(m_j);
    for (std::uint32_t e = w.offsets[j]; e < w.offsets[j + 1]; ++e) {
      mat[static_cast<std::size_t>(w.targets[e]) * n + j] -= share;
    }
  }
  std::vector<double> rhs(n, 1.0 - damping);

  // Gaussian elimination with partial pivoting.
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(mat[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double v = std::abs(mat[r * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) throw std::runtime_error("oracle_asp: singular system");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(mat[pivot * n + c], mat[col * n + c]);
      std::swap(rhs[pivot], rhs[col]);
    }
    const double diag = mat[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = mat[r * n + col] / diag;
      if (factor == 0.0) continue;
      mat[r * n + col] = 0.0;
      for (std::size_t c = col + 1; c < n; ++c) mat[r * n + c] -= factor * mat[col * n + c];
      rhs[r] -= factor * rhs[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double sum = rhs[ri];
    for (std::size_t c = ri + 1; c < n; ++c) sum -= mat[ri * n + c] * x[c];
    x[ri] = sum / mat[ri * n + ri];
  }
  return x;
}

}  // namespace citemerge
