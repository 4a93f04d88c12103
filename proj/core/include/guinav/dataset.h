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
#ifndef GUINAV_DATASET_H_
#define GUINAV_DATASET_H_

// Portable episode store. Layout on disk:
//
//   <root>/manifest.json
//   <root>/episodes/<episode_id>.json
//   <root>/screens/*.png
//
// JSON is written UTF-8 with sorted keys. The manifest records a SHA-256
// per episode file.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "guinav/agent.h"
#include "guinav/errors.h"
#include "guinav/evaluator.h"
#include "guinav/model.h"

namespace guinav::data {

inline constexpr char kSchemaVersion[] = "1";
inline constexpr char kManifestFile[] = "manifest.json";

struct Violation {
  std::string file;
  std::string pointer;  // JSON pointer inside file
  std::string rule;     // see ValidationRules()
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct RuleInfo {
  std::string_view id;
  std::string_view description;
};

// Every rule the validator can report.
std::span<const RuleInfo> ValidationRules();

// dataset_root is used to check screenshot existence; pass an empty path
// to skip that check.
std::vector<Violation> ValidateEpisodeJson(const nlohmann::json& doc,
                                           const std::filesystem::path& dataset_root);

// A directory is validated as a dataset (manifest, checksums, counts,
// unique ids, every episode); a file as a single episode. Throws IoError
// when the path cannot be read.
std::vector<Violation> Validate(const std::filesystem::path& path);

class ChecksumMismatchError : public Error {
 public:
  using Error::Error;
};

class SampleError : public Error {
 public:
  using Error::Error;
};

struct ManifestEntry {
  std::string file;  // relative to the dataset root
  std::string sha256;
  Category category = Category::kCustom;
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  std::string name;
  std::string version;
  std::map<Category, int> category_counts;
  std::vector<std::string> train;
  std::vector<std::string> test;
  std::map<std::string, ManifestEntry> episodes;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

nlohmann::json ToJson(const Manifest& m);
Manifest ManifestFromJson(const nlohmann::json& j);

// Serialized exactly as stored: two-space indent, sorted keys, trailing
// newline.
std::string EncodeEpisodeFile(const Episode& episode);

class Dataset {
 public:
  static Dataset Open(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }
  const Manifest& manifest() const { return manifest_; }
  std::vector<std::string> ids() const;

  // Throws NotFoundError for unknown ids and ChecksumMismatchError when the
  // file no longer matches the manifest.
  Episode LoadEpisode(const std::string& id) const;

 private:
  std::filesystem::path root_;
  Manifest manifest_;
};

enum class Split { kTest, kTrain, kAll };

std::optional<Split> ParseSplit(std::string_view name);

// Seeded sample of episode ids. Stratified sampling balances the five
// Android-in-the-Wild categories (quota n/5, remainder to the first categories; shortfalls move
// to categories with spare episodes). Throws SampleError when n exceeds the
// pool.
std::vector<std::string> Sample(const Manifest& manifest, std::size_t n,
                                std::uint64_t seed, bool stratify,
                                Split split = Split::kTest);

// Writes episodes and a fresh manifest under an exclusive lock on
// <root>/.manifest.lock. Screens are written as given (path -> PNG bytes).
void WriteDataset(const std::filesystem::path& root, const std::string& name,
                  const std::string& version, std::span<const Episode> episodes,
                  const std::map<std::string, Bytes>& screens,
                  const std::vector<std::string>& test_ids = {},
                  const std::vector<std::string>& train_ids = {});

// Recomputes checksums and counts from episodes/*.json.
Manifest RebuildManifest(const std::filesystem::path& root, const std::string& name,
                         const std::string& version);

// predictions.jsonl: one record per transcript step,
// {"episode_id", "step", "prediction": Action|null, "parse_failure"?, "raw_model_text"}.
std::filesystem::path StorePredictions(const std::filesystem::path& runs_root,
                                       const std::string& run_id,
                                       std::span<const agent::AgentTranscript> transcripts);
void WritePredictions(const std::filesystem::path& file,
                      std::span<const agent::AgentTranscript> transcripts);

// Episode id -> predictions indexed by step (gaps are nullopt).
using PredictionTable = std::map<std::string, std::vector<eval::Prediction>>;
PredictionTable LoadPredictions(const std::filesystem::path& file);

}  // namespace guinav::data

#endif  // GUINAV_DATASET_H_
