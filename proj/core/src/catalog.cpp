#include "projpack/catalog.hpp"

#include <sys/file.h>
#include <unistd.h>
#include <fcntl.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "num_format.hpp"
#include "projpack/analysis.hpp"
#include "projpack/bounds.hpp"
#include "projpack/certificate.hpp"
#include "projpack/constructions.hpp"
#include "projpack/errors.hpp"
#include "projpack/packing_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace projpack::catalog {

namespace {

constexpr double kImproveTol = 1e-10;

// advisory single-writer lock on <root>/.lock; blocks until acquired
class FileLock {
 public:
  explicit FileLock(const fs::path& root) {
    const fs::path path = root / ".lock";
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IoError("cannot open lock file: " + path.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw IoError("cannot lock catalog: " + path.string());
    }
  }
  ~FileLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + tmp.string());
    out << bytes;
    out.flush();
    if (!out) throw IoError("cannot write file: " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string());
}

std::string packing_rel_path(Field field, int d, int n) {
  return std::string("packings/") + field.letter() + "/" + std::to_string(d) + "/" +
         std::to_string(n) + ".txt";
}

double catalog_lower_bound(Field field, int d, int n) {
  if (d < 2 || n < 2) return 0.0;
  return bounds::best_lower_bound(d, n, field).best;
}

std::int64_t now_utc_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

json entry_to_json(const CatalogEntry& e) {
  json j;
  j["d"] = e.d;
  j["n"] = e.n;
  j["field"] = std::string(1, e.field.letter());
  j["coherence"] = e.coherence;
  j["lower_bound"] = e.lower_bound;
  j["creator_note"] = e.creator_note;
  j["timestamp"] = e.timestamp;
  j["packing_ref"] = e.packing_ref;
  return j;
}

CatalogEntry entry_from_json(const json& j, int lineno) {
  try {
    CatalogEntry e;
    e.d = j.at("d").get<int>();
    e.n = j.at("n").get<int>();
    const std::string f = j.at("field").get<std::string>();
    if (f.size() != 1) throw ParseError(lineno, "field tag must be a single letter");
    e.field = Field::from_letter(f[0]);
    e.coherence = j.at("coherence").get<double>();
    e.lower_bound = j.at("lower_bound").get<double>();
    e.creator_note = j.at("creator_note").get<std::string>();
    e.timestamp = j.at("timestamp").get<std::int64_t>();
    e.packing_ref = j.at("packing_ref").get<std::string>();
    return e;
  } catch (const json::exception& ex) {
    throw ParseError(lineno, std::string("bad catalog entry: ") + ex.what());
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

double round_sig(double x, int sig) { return std::stod(detail::fmt_sig(x, sig)); }

}  // namespace

std::string key_str(const EntryKey& key) {
  return std::string(1, key.field.letter()) + " " + std::to_string(key.d) + " " +
         std::to_string(key.n);
}

const char* submit_decision_str(SubmitDecision decision) {
  switch (decision) {
    case SubmitDecision::Accepted: return "Accepted";
    case SubmitDecision::RejectedWorse: return "RejectedWorse";
    case SubmitDecision::RejectedInvalid: return "RejectedInvalid";
  }
  return "?";
}

Catalog Catalog::open(const std::string& root) {
  Catalog cat(root);
  std::error_code ec;
  fs::create_directories(fs::path(root) / "packings", ec);
  if (ec) throw IoError("cannot create catalog directory: " + root);

  const fs::path index = fs::path(root) / "index.jsonl";
  if (fs::exists(index)) {
    std::ifstream in(index, std::ios::binary);
    if (!in) throw IoError("cannot open catalog index: " + index.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& ex) {
        throw ParseError(lineno, std::string("bad catalog index line: ") + ex.what());
      }
      CatalogEntry e = entry_from_json(j, lineno);
      cat.index_[{e.field.letter(), e.d, e.n}] = std::move(e);
    }
  }
  return cat;
}

std::optional<CatalogEntry> Catalog::find(Field field, int d, int n) const {
  const auto it = index_.find({field.letter(), d, n});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<CatalogEntry> Catalog::entries() const {
  std::vector<CatalogEntry> out;
  out.reserve(index_.size());
  for (const auto& [key, e] : index_) out.push_back(e);
  return out;
}

UnitFrame Catalog::load_packing(const CatalogEntry& entry) const {
  return io::load_packing_file((fs::path(root_) / entry.packing_ref).string());
}

void Catalog::write_index_locked() const {
  std::string bytes;
  for (const auto& [key, e] : index_) {
    bytes += entry_to_json(e).dump();
    bytes += '\n';
  }
  write_file_atomic(fs::path(root_) / "index.jsonl", bytes);
}

void Catalog::install_locked(const UnitFrame& frame, const std::string& note) {
  CatalogEntry e;
  e.d = frame.d();
  e.n = frame.n();
  e.field = frame.field();
  e.coherence = coherence(frame);
  e.lower_bound = catalog_lower_bound(frame.field(), frame.d(), frame.n());
  e.creator_note = note;
  e.timestamp = now_utc_seconds();
  e.packing_ref = packing_rel_path(frame.field(), frame.d(), frame.n());
  write_file_atomic(fs::path(root_) / e.packing_ref, io::serialize_packing(frame));
  index_[{e.field.letter(), e.d, e.n}] = std::move(e);
  write_index_locked();
}

SubmitResult Catalog::submit(const UnitFrame& frame, const std::string& note) {
  FileLock lock(root_);
  return submit_locked(frame, note);
}

SubmitResult Catalog::submit_locked(const UnitFrame& frame, const std::string& note) {
  SubmitResult res;
  if (frame.n() < 2) {
    res.diagnostics = "catalog stores packings with n >= 2, got n = " +
                      std::to_string(frame.n());
    return res;
  }
  if (note.empty()) {
    res.diagnostics = "creator note must be nonempty";
    return res;
  }
  const Certificate cert = certify(frame, CertifyProfile::numerical());
  res.coherence = cert.coherence;
  const double lb = catalog_lower_bound(frame.field(), frame.d(), frame.n());
  if (cert.coherence < lb - kImproveTol) {
    res.diagnostics = "coherence " + detail::fmt_sig(cert.coherence, 17) +
                      " lies below the proven lower bound " + detail::fmt_sig(lb, 17);
    return res;
  }

  const auto incumbent = find(frame.field(), frame.d(), frame.n());
  if (incumbent && !(cert.coherence < incumbent->coherence - kImproveTol)) {
    res.decision = SubmitDecision::RejectedWorse;
    return res;
  }

  install_locked(frame, note);
  res.decision = SubmitDecision::Accepted;
  res.auto_updated = auto_propagate_locked(frame.field(), frame.d(), frame.n());
  return res;
}

std::vector<EntryKey> Catalog::auto_propagate(Field field, int d, int n) {
  FileLock lock(root_);
  return auto_propagate_locked(field, d, n);
}

std::vector<EntryKey> Catalog::auto_propagate_locked(Field field, int d, int n) {
  if (!find(field, d, n))
    throw ValidationError("no catalog entry at " +
                          key_str(EntryKey{field, d, n}) + " to propagate from");
  std::vector<EntryKey> updated;
  int cur = n;
  while (cur - 1 >= 2) {
    const auto source = find(field, d, cur);
    const UnitFrame frame = load_packing(*source);
    const auto [removed, index] = constructions::best_removal(frame);
    const double mu = coherence(removed);
    const auto target = find(field, d, cur - 1);
    if (target && !(mu < target->coherence - kImproveTol)) break;
    install_locked(removed, "AUTO");
    updated.push_back(EntryKey{field, d, cur - 1});
    --cur;
  }
  return updated;
}

std::string Catalog::render_table(TableFormat format) const {
  const char* cols[] = {"d", "n", "field", "coherence", "lower_bound", "gap",
                        "creator_note"};
  struct Row {
    std::string cells[7];
  };
  std::vector<Row> rows;
  rows.reserve(index_.size());
  for (const auto& [key, e] : index_) {
    Row r;
    r.cells[0] = std::to_string(e.d);
    r.cells[1] = std::to_string(e.n);
    r.cells[2] = std::string(1, e.field.letter());
    r.cells[3] = detail::fmt_sig(e.coherence, 12);
    r.cells[4] = detail::fmt_sig(e.lower_bound, 12);
    r.cells[5] = detail::fmt_sig(e.coherence - e.lower_bound, 12);
    r.cells[6] = e.creator_note;
    rows.push_back(std::move(r));
  }

  if (format == TableFormat::Csv) {
    std::string out;
    for (int c = 0; c < 7; ++c) {
      if (c) out += ',';
      out += cols[c];
    }
    out += '\n';
    for (const auto& r : rows) {
      for (int c = 0; c < 7; ++c) {
        if (c) out += ',';
        out += csv_escape(r.cells[c]);
      }
      out += '\n';
    }
    return out;
  }

  if (format == TableFormat::Json) {
    json arr = json::array();
    for (const auto& [key, e] : index_) {
      json j;
      j["d"] = e.d;
      j["n"] = e.n;
      j["field"] = std::string(1, e.field.letter());
      j["coherence"] = round_sig(e.coherence, 12);
      j["lower_bound"] = round_sig(e.lower_bound, 12);
      j["gap"] = round_sig(e.coherence - e.lower_bound, 12);
      j["creator_note"] = e.creator_note;
      arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
  }

  std::size_t width[7];
  for (int c = 0; c < 7; ++c) width[c] = std::string(cols[c]).size();
  for (const auto& r : rows)
    for (int c = 0; c < 7; ++c) width[c] = std::max(width[c], r.cells[c].size());
  std::string out;
  const auto emit = [&](const std::string* cells) {
    for (int c = 0; c < 7; ++c) {
      if (c) out += "  ";
      out += cells[c];
      if (c + 1 < 7) out.append(width[c] - cells[c].size(), ' ');
    }
    out += '\n';
  };
  std::string header[7];
  for (int c = 0; c < 7; ++c) header[c] = cols[c];
  emit(header);
  for (const auto& r : rows) emit(r.cells);
  return out;
}

std::vector<std::string> Catalog::fsck() const {
  std::vector<std::string> problems;
  const auto complain = [&](const CatalogEntry& e, const std::string& what) {
    problems.push_back(key_str(EntryKey{e.field, e.d, e.n}) + ": " + what);
  };

  for (const auto& [key, e] : index_) {
    if (e.creator_note.empty()) complain(e, "empty creator note");
    if (!(e.coherence >= e.lower_bound - kImproveTol))
      complain(e, "coherence " + detail::fmt_sig(e.coherence, 17) +
                      " below lower bound " + detail::fmt_sig(e.lower_bound, 17));
    std::optional<UnitFrame> frame;
    try {
      frame = load_packing(e);
    } catch (const Error& ex) {
      complain(e, std::string("packing file unusable: ") + ex.what());
      continue;
    }
    if (frame->d() != e.d || frame->n() != e.n || frame->field() != e.field) {
      complain(e, "packing file header disagrees with the index key");
      continue;
    }
    const double mu = coherence(*frame);
    if (std::abs(mu - e.coherence) > 1e-9)
      complain(e, "re-certified coherence " + detail::fmt_sig(mu, 17) +
                      " differs from recorded " + detail::fmt_sig(e.coherence, 17));
  }

  // leaderboard monotone in n for fixed (field, d): removing a vector never
  // increases coherence, so a best-known table must be non-decreasing
  const CatalogEntry* prev = nullptr;
  for (const auto& [key, e] : index_) {
    if (prev && prev->field == e.field && prev->d == e.d && prev->n < e.n) {
      if (prev->coherence > e.coherence + 1e-12)
        complain(e, "coherence " + detail::fmt_sig(e.coherence, 17) +
                        " below the n = " + std::to_string(prev->n) + " entry " +
                        detail::fmt_sig(prev->coherence, 17) +
                        " (run auto propagation)");
    }
    prev = &e;
  }
  return problems;
}

}  // namespace projpack::catalog
