#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "projpack/frame.hpp"

namespace projpack::catalog {

// One leaderboard record. packing_ref is relative to the catalog root.
struct CatalogEntry {
  int d = 0;
  int n = 0;
  Field field = Field::complex();
  double coherence = 0.0;
  double lower_bound = 0.0;
  std::string creator_note;
  std::int64_t timestamp = 0;  // UTC seconds
  std::string packing_ref;
};

struct EntryKey {
  Field field = Field::complex();
  int d = 0;
  int n = 0;
};
std::string key_str(const EntryKey& key);  // e.g. "C 5 29"

enum class SubmitDecision { Accepted, RejectedWorse, RejectedInvalid };
const char* submit_decision_str(SubmitDecision decision);

struct SubmitResult {
  SubmitDecision decision = SubmitDecision::RejectedInvalid;
  double coherence = 0.0;
  std::string diagnostics;             // nonempty iff RejectedInvalid
  std::vector<EntryKey> auto_updated;  // AUTO entries installed after acceptance
};

enum class TableFormat { Text, Csv, Json };

// On-disk layout under the root directory:
//   index.jsonl                 one CatalogEntry per line
//   packings/<C|R>/<d>/<n>.txt  canonical packing files
//   .lock                       advisory lock, held across mutations
// Index rewrites and packing writes go through a temp file + rename, so
// readers only ever see complete snapshots. Mutations are single-writer via
// flock on .lock; reads take no lock.
class Catalog {
 public:
  // Creates the root and packings/ directory when absent, loads index.jsonl
  // when present. Corrupt index lines raise ParseError with the line number.
  static Catalog open(const std::string& root);

  const std::string& root() const { return root_; }
  std::optional<CatalogEntry> find(Field field, int d, int n) const;
  std::vector<CatalogEntry> entries() const;  // sorted by (field, d, n)

  // Certifies the frame and accepts iff there is no incumbent at (d, n,
  // field) or the new coherence beats it by more than 1e-10. Acceptance
  // writes the packing file, updates the index with lower_bound =
  // best_lower_bound(d, n, field), and runs AUTO propagation downward.
  // Frames with n < 2, an empty note, or coherence below the proven lower
  // bound (beyond 1e-10, a sign of a broken certificate) are RejectedInvalid.
  SubmitResult submit(const UnitFrame& frame, const std::string& note);

  // Installs best_removal(incumbent at (d, n)) at n-1 whenever it beats the
  // incumbent there by more than 1e-10 (or none exists), with note "AUTO",
  // recursing downward until no improvement or n-1 < 2. Returns the keys
  // installed. Missing source entry raises ValidationError.
  std::vector<EntryKey> auto_propagate(Field field, int d, int n);

  // Rows sorted by (field, d, n); columns d, n, field, coherence,
  // lower_bound, gap, creator_note; numbers at 12 significant digits.
  std::string render_table(TableFormat format) const;

  // Health check, returns one message per problem (empty means healthy):
  // packing_ref resolves and re-certifies to the recorded coherence within
  // 1e-9, header matches the key, coherence >= lower_bound - 1e-10, note
  // nonempty, and per (field, d) coherence is non-decreasing in n.
  std::vector<std::string> fsck() const;

  UnitFrame load_packing(const CatalogEntry& entry) const;

 private:
  explicit Catalog(std::string root) : root_(std::move(root)) {}

  using MapKey = std::tuple<char, int, int>;  // (field letter, d, n)

  SubmitResult submit_locked(const UnitFrame& frame, const std::string& note);
  std::vector<EntryKey> auto_propagate_locked(Field field, int d, int n);
  void install_locked(const UnitFrame& frame, const std::string& note);
  void write_index_locked() const;

  std::string root_;
  std::map<MapKey, CatalogEntry> index_;
};

}  // namespace projpack::catalog
