// Copyright 2026 The GuiNav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "guinav/dataset.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "guinav/codec.h"
#include "guinav/image.h"
#include "guinav/sha256.h"

namespace guinav::data {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<RuleInfo, 19> kRules{{
    {"schema.type", "field has the wrong JSON type"},
    {"schema.required", "required field missing"},
    {"schema.enum", "value outside the allowed enumeration"},
    {"point.range", "point coordinates lie in [0, 1]"},
    {"bbox.range", "bbox x, y, w, h lie in [0, 1]"},
    {"bbox.extent", "x + w <= 1 and y + h <= 1 (with 1e-6 slack)"},
    {"bbox.positive", "bbox width and height are positive"},
    {"element.content_exclusive", "exactly one of text or icon_class"},
    {"element.ocr_nonempty", "OCR text is non-empty"},
    {"action.dual_point_payload", "dual_point carries touch and lift only"},
    {"action.type_text_payload", "type_text carries a non-empty text only"},
    {"action.no_payload", "press and status actions carry no payload"},
    {"step.index", "step index equals its position"},
    {"episode.nonempty", "an episode has at least one step"},
    {"episode.id_unique", "episode ids are unique within a dataset"},
    {"image.exists", "referenced screenshot exists"},
    {"manifest.checksum", "episode file matches its manifest SHA-256"},
    {"manifest.counts", "category counts match the episode files"},
    {"manifest.file_missing", "every manifest entry has a file"},
}};

class Checker {
 public:
  Checker(std::string file, fs::path root) : file_(std::move(file)), root_(std::move(root)) {}

  std::vector<Violation> Take() { return std::move(out_); }

  void Add(const std::string& ptr, std::string_view rule, const std::string& msg) {
    out_.push_back({file_, ptr, std::string(rule), msg});
  }

  const json* Require(const json& obj, const std::string& ptr, const char* key,
                      json::value_t type) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      Add(ptr + "/" + key, "schema.required", std::string("missing field '") + key + "'");
      return nullptr;
    }
    if (!TypeMatches(*it, type)) {
      Add(ptr + "/" + key, "schema.type",
          std::string("expected ") + TypeName(type) + ", got " + it->type_name());
      return nullptr;
    }
    return &*it;
  }

  const json* Optional(const json& obj, const std::string& ptr, const char* key,
                       json::value_t type) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    if (!TypeMatches(*it, type)) {
      Add(ptr + "/" + key, "schema.type",
          std::string("expected ") + TypeName(type) + ", got " + it->type_name());
      return nullptr;
    }
    return &*it;
  }

  void Episode(const json& doc) {
    if (!doc.is_object()) {
      Add("", "schema.type", "episode document must be an object");
      return;
    }
    Require(doc, "", "episode_id", json::value_t::string);
    Require(doc, "", "instruction", json::value_t::string);
    if (const json* cat = Require(doc, "", "category", json::value_t::string)) {
      if (!ParseCategory(cat->get<std::string>())) {
        Add("/category", "schema.enum", "unknown category '" + cat->get<std::string>() + "'");
      }
    }
    const json* steps = Require(doc, "", "steps", json::value_t::array);
    if (!steps) return;
    if (steps->empty()) Add("/steps", "episode.nonempty", "episode has no steps");
    for (std::size_t i = 0; i < steps->size(); ++i) {
      StepAt((*steps)[i], "/steps/" + std::to_string(i), static_cast<int>(i));
    }
  }

 private:
  static bool TypeMatches(const json& j, json::value_t type) {
    switch (type) {
      case json::value_t::number_float: return j.is_number();
      case json::value_t::number_integer: return j.is_number_integer();
      default: return j.type() == type;
    }
  }

  static const char* TypeName(json::value_t type) {
    switch (type) {
      case json::value_t::object: return "object";
      case json::value_t::array: return "array";
      case json::value_t::string: return "string";
      case json::value_t::number_float: return "number";
      case json::value_t::number_integer: return "integer";
      default: return "value";
    }
  }

  void StepAt(const json& step, const std::string& ptr, int position) {
    if (!step.is_object()) {
      Add(ptr, "schema.type", "step must be an object");
      return;
    }
    if (const json* index = Require(step, ptr, "index", json::value_t::number_integer)) {
      if (index->get<long long>() != position) {
        Add(ptr + "/index", "step.index",
            "index " + index->dump() + " at position " + std::to_string(position));
      }
    }
    if (const json* shot = Require(step, ptr, "screenshot", json::value_t::string)) {
      if (!root_.empty() && !fs::exists(root_ / shot->get<std::string>())) {
        Add(ptr + "/screenshot", "image.exists",
            "screenshot not found: " + shot->get<std::string>());
      }
    }
    if (const json* elements = Require(step, ptr, "elements", json::value_t::array)) {
      for (std::size_t i = 0; i < elements->size(); ++i) {
        ElementAt((*elements)[i], ptr + "/elements/" + std::to_string(i));
      }
    }
    if (const json* action = Require(step, ptr, "gold_action", json::value_t::object)) {
      ActionAt(*action, ptr + "/gold_action");
    }
  }

  void Unit(const json& obj, const std::string& ptr, const char* key,
            std::string_view rule, std::optional<double>& out) {
    out.reset();
    if (const json* v = Require(obj, ptr, key, json::value_t::number_float)) {
      const double d = v->get<double>();
      if (!std::isfinite(d) || d < 0.0 || d > 1.0) {
        Add(ptr + "/" + key, rule, std::string(key) + " = " + v->dump() + " outside [0, 1]");
      }
      out = d;
    }
  }

  void PointAt(const json& p, const std::string& ptr) {
    if (!p.is_object()) {
      Add(ptr, "schema.type", "point must be an object");
      return;
    }
    std::optional<double> x, y;
    Unit(p, ptr, "x", "point.range", x);
    Unit(p, ptr, "y", "point.range", y);
  }

  void BBoxAt(const json& b, const std::string& ptr) {
    std::optional<double> x, y, w, h;
    Unit(b, ptr, "x", "bbox.range", x);
    Unit(b, ptr, "y", "bbox.range", y);
    Unit(b, ptr, "w", "bbox.range", w);
    Unit(b, ptr, "h", "bbox.range", h);
    if (w && *w <= 0.0) Add(ptr + "/w", "bbox.positive", "width must be positive");
    if (h && *h <= 0.0) Add(ptr + "/h", "bbox.positive", "height must be positive");
    if (x && w && *x + *w > 1.0 + kBoxEpsilon) {
      Add(ptr + "/w", "bbox.extent", "x + w exceeds 1");
    }
    if (y && h && *y + *h > 1.0 + kBoxEpsilon) {
      Add(ptr + "/h", "bbox.extent", "y + h exceeds 1");
    }
  }

  void ElementAt(const json& e, const std::string& ptr) {
    if (!e.is_object()) {
      Add(ptr, "schema.type", "element must be an object");
      return;
    }
    if (const json* b = Require(e, ptr, "bbox", json::value_t::object)) BBoxAt(*b, ptr + "/bbox");
    const json* text = Optional(e, ptr, "text", json::value_t::string);
    const json* icon = Optional(e, ptr, "icon_class", json::value_t::string);
    const bool has_text = e.contains("text") && !e["text"].is_null();
    const bool has_icon = e.contains("icon_class") && !e["icon_class"].is_null();
    if (has_text == has_icon) {
      Add(ptr, "element.content_exclusive",
          has_text ? "both text and icon_class present" : "neither text nor icon_class present");
    }
    if (text && text->get<std::string>().empty()) {
      Add(ptr + "/text", "element.ocr_nonempty", "OCR text is empty");
    }
    if (icon && icon->get<std::string>().empty()) {
      Add(ptr + "/icon_class", "schema.type", "icon_class is empty");
    }
    if (const json* source = Optional(e, ptr, "source", json::value_t::string)) {
      if (!ParseElementSource(source->get<std::string>())) {
        Add(ptr + "/source", "schema.enum", "unknown element source");
      }
    }
  }

  void ActionAt(const json& a, const std::string& ptr) {
    const json* kind_field = Require(a, ptr, "kind", json::value_t::string);
    if (!kind_field) return;
    auto kind = ParseActionKind(kind_field->get<std::string>());
    if (!kind) {
      Add(ptr + "/kind", "schema.enum", "unknown action kind '" + kind_field->get<std::string>() + "'");
      return;
    }
    const bool has_touch = a.contains("touch") && !a["touch"].is_null();
    const bool has_lift = a.contains("lift") && !a["lift"].is_null();
    const bool has_text = a.contains("text") && !a["text"].is_null();
    if (has_touch) PointAt(a["touch"], ptr + "/touch");
    if (has_lift) PointAt(a["lift"], ptr + "/lift");
    switch (*kind) {
      case ActionKind::kDualPoint:
        if (!has_touch || !has_lift) {
          Add(ptr, "action.dual_point_payload", "dual_point requires touch and lift");
        }
        if (has_text) Add(ptr + "/text", "action.dual_point_payload", "dual_point carries no text");
        break;
      case ActionKind::kTypeText: {
        const json* text = Optional(a, ptr, "text", json::value_t::string);
        if (!has_text || (text && text->get<std::string>().empty())) {
          Add(ptr + "/text", "action.type_text_payload", "type_text requires a non-empty text");
        }
        if (has_touch || has_lift) {
          Add(ptr, "action.type_text_payload", "type_text carries no points");
        }
        break;
      }
      default:
        if (has_touch || has_lift || has_text) {
          Add(ptr, "action.no_payload",
              std::string(ToString(*kind)) + " must not carry a payload");
        }
    }
  }

  std::string file_;
  fs::path root_;
  std::vector<Violation> out_;
};

json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

fs::path InferRoot(const fs::path& episode_file) {
  const fs::path parent = episode_file.parent_path();
  if (parent.filename() == "episodes") return parent.parent_path();
  return parent;
}

// Exclusive advisory lock held for the lifetime of the object.
class ManifestLock {
 public:
  explicit ManifestLock(const fs::path& root) {
    fs::create_directories(root);
    const fs::path lock = root / ".manifest.lock";
    fd_ = ::open(lock.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) throw IoError("cannot open " + lock.string());
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw IoError("cannot lock " + lock.string());
    }
  }
  ~ManifestLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  ManifestLock(const ManifestLock&) = delete;
  ManifestLock& operator=(const ManifestLock&) = delete;

 private:
  int fd_ = -1;
};

// Unbiased draw in [0, bound) from the 64-bit engine, independent of the
// standard library's distribution implementation.
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// First k elements of a seeded Fisher-Yates shuffle.
std::vector<std::string> Draw(std::vector<std::string> pool, std::size_t k,
                              std::mt19937_64& rng) {
  std::sort(pool.begin(), pool.end());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(UniformBelow(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

std::span<const RuleInfo> ValidationRules() { return kRules; }

std::vector<Violation> ValidateEpisodeJson(const json& doc, const fs::path& dataset_root) {
  Checker checker("", dataset_root);
  checker.Episode(doc);
  return checker.Take();
}

std::vector<Violation> Validate(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file or directory: " + path.string());
  if (!fs::is_directory(path)) {
    Checker checker(path.filename().string(), InferRoot(path));
    checker.Episode(ReadJson(path));
    return checker.Take();
  }

  std::vector<Violation> out;
  const fs::path manifest_path = path / kManifestFile;
  Manifest manifest;
  try {
    manifest = ManifestFromJson(ReadJson(manifest_path));
  } catch (const DecodeError& e) {
    out.push_back({kManifestFile, e.pointer(), "schema.type", e.what()});
    return out;
  }

  std::map<std::string, std::string> seen_ids;  // episode_id -> file
  std::map<Category, int> counts;
  for (const auto& [id, entry] : manifest.episodes) {
    const fs::path file = path / entry.file;
    if (!fs::exists(file)) {
      out.push_back({kManifestFile, "/episodes/" + id, "manifest.file_missing",
                     "missing episode file " + entry.file});
      continue;
    }
    const Bytes bytes = ReadFileBytes(file);
    if (Sha256Hex(bytes) != entry.sha256) {
      out.push_back({entry.file, "", "manifest.checksum",
                     "SHA-256 does not match manifest entry for " + id});
    }
    json doc;
    try {
      doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
      out.push_back({entry.file, "", "schema.type", e.what()});
      continue;
    }
    Checker checker(entry.file, path);
    checker.Episode(doc);
    auto found = checker.Take();
    out.insert(out.end(), found.begin(), found.end());
    if (doc.is_object() && doc.contains("episode_id") && doc["episode_id"].is_string()) {
      const std::string eid = doc["episode_id"].get<std::string>();
      auto [it, inserted] = seen_ids.emplace(eid, entry.file);
      if (!inserted) {
        out.push_back({entry.file, "/episode_id", "episode.id_unique",
                       "episode id '" + eid + "' also used by " + it->second});
      }
      if (eid != id) {
        out.push_back({entry.file, "/episode_id", "episode.id_unique",
                       "file declares id '" + eid + "' but manifest lists '" + id + "'"});
      }
    }
    if (doc.is_object() && doc.contains("category") && doc["category"].is_string()) {
      if (auto c = ParseCategory(doc["category"].get<std::string>())) ++counts[*c];
    }
  }
  if (counts != manifest.category_counts) {
    out.push_back({kManifestFile, "/categories", "manifest.counts",
                   "category counts do not match episode files"});
  }
  return out;
}

json ToJson(const Manifest& m) {
  json categories = json::object();
  for (const auto& [c, n] : m.category_counts) categories[std::string(ToString(c))] = n;
  json episodes = json::object();
  for (const auto& [id, e] : m.episodes) {
    episodes[id] = {{"file", e.file}, {"sha256", e.sha256}, {"category", ToString(e.category)}};
  }
  return {{"name", m.name},
          {"version", m.version},
          {"schema_version", kSchemaVersion},
          {"categories", categories},
          {"split", {{"train", m.train}, {"test", m.test}}},
          {"episodes", episodes}};
}

Manifest ManifestFromJson(const json& j) {
  Manifest m;
  try {
    m.name = j.at("name").get<std::string>();
    m.version = j.at("version").get<std::string>();
    for (const auto& [name, n] : j.at("categories").items()) {
      auto c = ParseCategory(name);
      if (!c) throw DecodeError("/categories/" + name, "unknown category");
      m.category_counts[*c] = n.get<int>();
    }
    const json& split = j.at("split");
    m.train = split.value("train", std::vector<std::string>{});
    m.test = split.value("test", std::vector<std::string>{});
    for (const auto& [id, e] : j.at("episodes").items()) {
      ManifestEntry entry;
      entry.file = e.at("file").get<std::string>();
      entry.sha256 = e.at("sha256").get<std::string>();
      auto c = ParseCategory(e.at("category").get<std::string>());
      if (!c) throw DecodeError("/episodes/" + id + "/category", "unknown category");
      entry.category = *c;
      m.episodes.emplace(id, std::move(entry));
    }
  } catch (const json::exception& e) {
    throw DecodeError("", std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::string EncodeEpisodeFile(const Episode& episode) {
  return json(episode).dump(2) + "\n";
}

Dataset Dataset::Open(const fs::path& root) {
  Dataset d;
  d.root_ = root;
  d.manifest_ = ManifestFromJson(ReadJson(root / kManifestFile));
  return d;
}

std::vector<std::string> Dataset::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, e] : manifest_.episodes) out.push_back(id);
  return out;
}

Episode Dataset::LoadEpisode(const std::string& id) const {
  auto it = manifest_.episodes.find(id);
  if (it == manifest_.episodes.end()) throw NotFoundError("unknown episode id " + id);
  const Bytes bytes = ReadFileBytes(root_ / it->second.file);
  if (Sha256Hex(bytes) != it->second.sha256) {
    throw ChecksumMismatchError("checksum mismatch for episode " + id + " (" +
                                it->second.file + ")");
  }
  try {
    return DecodeEpisode(json::parse(bytes.begin(), bytes.end()));
  } catch (const json::parse_error& e) {
    throw DecodeError("", it->second.file + ": " + e.what());
  }
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "test") return Split::kTest;
  if (name == "train") return Split::kTrain;
  if (name == "all") return Split::kAll;
  return std::nullopt;
}

std::vector<std::string> Sample(const Manifest& manifest, std::size_t n,
                                std::uint64_t seed, bool stratify, Split split) {
  std::vector<std::string> pool;
  switch (split) {
    case Split::kTest: pool = manifest.test; break;
    case Split::kTrain: pool = manifest.train; break;
    case Split::kAll:
      for (const auto& [id, e] : manifest.episodes) pool.push_back(id);
      break;
  }
  std::mt19937_64 rng(seed);
  if (!stratify) {
    if (n > pool.size()) {
      throw SampleError("requested " + std::to_string(n) + " episodes but only " +
                        std::to_string(pool.size()) + " are available");
    }
    return Draw(std::move(pool), n, rng);
  }

  constexpr std::size_t kStrata = std::size(kAitwCategories);
  std::array<std::vector<std::string>, kStrata> by_category;
  for (const std::string& id : pool) {
    auto it = manifest.episodes.find(id);
    if (it == manifest.episodes.end()) continue;
    for (std::size_t c = 0; c < kStrata; ++c) {
      if (it->second.category == kAitwCategories[c]) by_category[c].push_back(id);
    }
  }
  std::size_t available = 0;
  for (const auto& ids : by_category) available += ids.size();
  if (n > available) {
    throw SampleError("requested " + std::to_string(n) + " stratified episodes but only " +
                      std::to_string(available) + " are available");
  }
  std::array<std::size_t, kStrata> quota{};
  for (std::size_t c = 0; c < kStrata; ++c) quota[c] = n / kStrata + (c < n % kStrata ? 1 : 0);
  // Move any shortfall to categories with spare episodes, in category order.
  std::size_t shortfall = 0;
  for (std::size_t c = 0; c < kStrata; ++c) {
    if (quota[c] > by_category[c].size()) {
      shortfall += quota[c] - by_category[c].size();
      quota[c] = by_category[c].size();
    }
  }
  while (shortfall > 0) {
    for (std::size_t c = 0; c < kStrata && shortfall > 0; ++c) {
      if (quota[c] < by_category[c].size()) {
        ++quota[c];
        --shortfall;
      }
    }
  }
  std::vector<std::string> out;
  for (std::size_t c = 0; c < kStrata; ++c) {
    auto drawn = Draw(std::move(by_category[c]), quota[c], rng);
    out.insert(out.end(), drawn.begin(), drawn.end());
  }
  return out;
}

Manifest RebuildManifest(const fs::path& root, const std::string& name,
                         const std::string& version) {
  Manifest m;
  m.name = name;
  m.version = version;
  const fs::path dir = root / "episodes";
  if (!fs::is_directory(dir)) return m;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& file : files) {
    const Bytes bytes = ReadFileBytes(file);
    const Episode e = DecodeEpisode(json::parse(bytes.begin(), bytes.end()));
    m.episodes[e.episode_id] = {"episodes/" + file.filename().string(), Sha256Hex(bytes),
                                e.category};
    ++m.category_counts[e.category];
  }
  return m;
}

void WriteDataset(const fs::path& root, const std::string& name,
                  const std::string& version, std::span<const Episode> episodes,
                  const std::map<std::string, Bytes>& screens,
                  const std::vector<std::string>& test_ids,
                  const std::vector<std::string>& train_ids) {
  ManifestLock lock(root);
  for (const auto& [rel, png] : screens) WriteFileBytes(root / rel, png);
  std::set<std::string> ids;
  for (const Episode& e : episodes) {
    if (!ids.insert(e.episode_id).second) {
      throw ContractViolation("duplicate episode id " + e.episode_id);
    }
    WriteText(root / "episodes" / (e.episode_id + ".json"), EncodeEpisodeFile(e));
  }
  Manifest m = RebuildManifest(root, name, version);
  m.test = test_ids;
  m.train = train_ids;
  WriteText(root / kManifestFile, ToJson(m).dump(2) + "\n");
}

void WritePredictions(const fs::path& file,
                      std::span<const agent::AgentTranscript> transcripts) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  for (const agent::AgentTranscript& t : transcripts) {
    for (const agent::TranscriptStep& s : t.steps) {
      json rec = {{"episode_id", t.episode_id},
                  {"step", s.index},
                  {"raw_model_text", s.raw_model_text}};
      if (auto action = agent::PredictedAction(s)) {
        rec["prediction"] = *action;
      } else {
        rec["prediction"] = nullptr;
        const auto& f = std::get<agent::ParseFailure>(s.parsed);
        rec["parse_failure"] = {{"kind", agent::ToString(f.kind)}, {"detail", f.detail}};
      }
      out << rec.dump() << '\n';
    }
  }
}

fs::path StorePredictions(const fs::path& runs_root, const std::string& run_id,
                          std::span<const agent::AgentTranscript> transcripts) {
  const fs::path file = runs_root / run_id / "predictions.jsonl";
  WritePredictions(file, transcripts);
  return file;
}

PredictionTable LoadPredictions(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read " + file.string());
  PredictionTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json rec = json::parse(line);
      const std::string id = rec.at("episode_id").get<std::string>();
      const int step = rec.at("step").get<int>();
      if (step < 0) throw DecodeError("/step", "negative step index");
      auto& row = table[id];
      if (row.size() <= static_cast<std::size_t>(step)) row.resize(step + 1);
      const json& p = rec.at("prediction");
      row[step] = p.is_null() ? std::nullopt : std::optional<Action>(DecodeAction(p));
    } catch (const json::exception& e) {
      throw DecodeError("", file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return table;
}

}  // namespace guinav::data
