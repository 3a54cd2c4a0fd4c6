#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "curvquad/multi_index.hpp"
#include "curvquad/nystrom.hpp"

namespace curvquad::bench {

enum class Provenance { exact, series, none };

struct ReferenceValue {
  double value = 0.0;
  Provenance provenance = Provenance::exact;
  /// Largest k (and l) of the truncated series.
  int truncation = 0;
  /// Estimated truncation error (difference between extrapolation levels).
  double tail_bound = 0.0;
};

struct ReferencePair {
  ReferenceValue l2;
  ReferenceValue h1;
};

/// int_0^1 t^a sin(l pi t) dt in closed form. Throws DomainError for a < 0 or l < 1.
double ref_S(int a, int l);

/// Inner products of the zero-trace functions -Laplacian(v) = x^alpha on the unit square, from
/// the double sine series (L2 truncated at 2000, H1 extrapolated from 1000/2000/4000).
ReferencePair ref_square_bubble_pair(MultiIndex alpha, MultiIndex beta);

enum class SquarePair { vv, v_next, v_opposite, v0_w1, v1_w1, ww, bubble_bubble, v_bubble, w_bubble };
/// Square basis inner products: exact rationals, or single series in k for the edge functions.
ReferencePair ref_square_basis(SquarePair pair);

enum class PacmanPair { v1v1, v1v2, v1v3, v2v3 };
/// Closed forms on the sector of angle pi/mu for v1 = r^mu sin(mu theta), v2 = r^nu sin(nu theta),
/// v3 = (1-r^2) r^2 sin(theta) sin(theta - pi/mu). Requires 0 < nu <= mu < 1 (nu < mu for v1v2).
ReferencePair ref_pacman(double mu, double nu, PacmanPair pair);

struct ExperimentSpec {
  /// area | square-basis | square-bubble | pacman | puzzle
  std::string experiment;
  std::vector<int> ns{4, 8, 16, 32, 64};
  int sigma = 7;
  /// Replaces the built-in cells of the area experiment.
  std::optional<std::string> cell_file;
  NeumannOptions solver;
  /// Worker threads over n values; output order does not depend on it.
  int jobs = 1;
};

/// Throws DomainError on an unknown experiment or non-increasing n list.
void validate_spec(const ExperimentSpec& spec);

struct ResultRow {
  std::string experiment;
  std::string cell;
  std::string pair;
  /// L2, H1 or area
  std::string quantity;
  int n = 0;
  int sigma = 0;
  double computed = 0.0;
  /// NaN without a reference.
  double reference = 0.0;
  Provenance provenance = Provenance::none;
  /// |computed - reference|, or |I(n) - I(previous n)| when there is no reference.
  double abs_error = 0.0;
  double runtime_ms = 0.0;
  /// "ok", or the diagnostic of a failed evaluation.
  std::string status = "ok";
  bool solver_failure = false;
};

/// Rows ordered by (pair, quantity, n) in the order of the experiment's table.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

std::vector<std::string> experiment_names();

/// CSV with header; reals with 17 significant digits.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// One Markdown table per experiment: pair, n, then computed/error per quantity.
void write_markdown(std::ostream& out, const std::vector<ResultRow>& rows);

struct GoldenEntry {
  std::string experiment;
  std::string pair;
  std::string quantity;
  int n = 0;
  double max_abs_error = 0.0;
};

/// Lines `experiment pair quantity n max_abs_error`; '#' starts a comment.
std::vector<GoldenEntry> parse_golden(std::istream& in);
std::vector<GoldenEntry> load_golden(const std::string& path);

/// Human-readable violations: rows whose abs_error exceeds (or cannot be compared with) the
/// manifest entry. Manifest entries without a computed row are ignored.
std::vector<std::string> check_golden(const std::vector<ResultRow>& rows, const std::vector<GoldenEntry>& golden);

}  // namespace curvquad::bench
