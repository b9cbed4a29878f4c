#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace hypforge {

struct ModelRecord {
  std::string id;
  std::string source;  // verbatim
  std::string created;  // ISO 8601, UTC
  std::string updated;
  std::size_t errors = 0;  // summary of the latest parse
  std::size_t warnings = 0;
};

/// Model records in memory, mirrored to a single JSON file when a path is
/// given. Readers share, writers are exclusive. Throws std::runtime_error if
/// an existing file cannot be read or the file cannot be written.
class ModelStore {
 public:
  explicit ModelStore(std::optional<std::string> path = std::nullopt);

  ModelRecord create(const std::string& source, std::size_t errors, std::size_t warnings);
  std::optional<ModelRecord> get(const std::string& id) const;
  std::optional<ModelRecord> update(const std::string& id, const std::string& source, std::size_t errors,
                                    std::size_t warnings);
  bool set_parse_summary(const std::string& id, std::size_t errors, std::size_t warnings);
  std::vector<ModelRecord> list() const;

 private:
  void load();
  void save() const;
  std::string fresh_id();

  std::optional<std::string> path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, ModelRecord> records_;
  std::uint64_t counter_ = 0;
};

std::string utc_timestamp();

}  // namespace hypforge
