#include "hypforge/model_store.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>

#include "json.hpp"

namespace hypforge {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

ModelStore::ModelStore(std::optional<std::string> path) : path_(std::move(path)) {
  std::random_device rd;
  counter_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  if (path_ && std::filesystem::exists(*path_)) load();
}

std::string ModelStore::fresh_id() {
  for (;;) {
    std::uint64_t x = ++counter_ * 0x9e3779b97f4a7c15ull;
    x ^= x >> 29;
    char buf[24];
    std::snprintf(buf, sizeof buf, "m%012llx", static_cast<unsigned long long>(x & 0xffffffffffffull));
    if (!records_.contains(buf)) return buf;
  }
}

ModelRecord ModelStore::create(const std::string& source, std::size_t errors, std::size_t warnings) {
  std::unique_lock lock(mu_);
  ModelRecord r;
  r.id = fresh_id();
  r.source = source;
  r.created = r.updated = utc_timestamp();
  r.errors = errors;
  r.warnings = warnings;
  records_[r.id] = r;
  save();
  return r;
}

std::optional<ModelRecord> ModelStore::get(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::optional<ModelRecord> ModelStore::update(const std::string& id, const std::string& source, std::size_t errors,
                                              std::size_t warnings) {
  std::unique_lock lock(mu_);
  auto it = records_.find(id);
  if (it == records_.end()) return std::nullopt;
  it->second.source = source;
  it->second.updated = utc_timestamp();
  it->second.errors = errors;
  it->second.warnings = warnings;
  save();
  return it->second;
}

bool ModelStore::set_parse_summary(const std::string& id, std::size_t errors, std::size_t warnings) {
  std::unique_lock lock(mu_);
  auto it = records_.find(id);
  if (it == records_.end()) return false;
  if (it->second.errors == errors && it->second.warnings == warnings) return true;
  it->second.errors = errors;
  it->second.warnings = warnings;
  save();
  return true;
}

std::vector<ModelRecord> ModelStore::list() const {
  std::shared_lock lock(mu_);
  std::vector<ModelRecord> out;
  for (const auto& [id, r] : records_) out.push_back(r);
  return out;
}

void ModelStore::load() {
  std::ifstream in(*path_, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read model store " + *path_);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    for (const auto& e : j.at("models")) {
      ModelRecord r;
      r.id = e.at("id").get<std::string>();
      r.source = e.at("source").get<std::string>();
      r.created = e.at("created").get<std::string>();
      r.updated = e.at("updated").get<std::string>();
      r.errors = e.value("errors", std::size_t{0});
      r.warnings = e.value("warnings", std::size_t{0});
      records_[r.id] = std::move(r);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt model store " + *path_ + ": " + e.what());
  }
}

void ModelStore::save() const {
  if (!path_) return;
  nlohmann::json models = nlohmann::json::array();
  for (const auto& [id, r] : records_) {
    models.push_back({{"id", r.id},
                      {"source", r.source},
                      {"created", r.created},
                      {"updated", r.updated},
                      {"errors", r.errors},
                      {"warnings", r.warnings}});
  }
  const std::string tmp = *path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write model store " + tmp);
    out << nlohmann::json{{"models", models}}.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write model store " + tmp);
  }
  std::filesystem::rename(tmp, *path_);
}

}  // namespace hypforge
