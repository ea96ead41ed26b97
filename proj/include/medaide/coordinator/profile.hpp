#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace medaide::coordinator {

struct VisitRecord {
  std::string date;
  std::string summary;
};

struct PatientProfile {
  std::string id;
  std::map<std::string, std::string> demographics;
  std::vector<std::string> allergies;
  std::vector<std::string> medications;
  std::vector<VisitRecord> visits;

  bool operator==(const PatientProfile& other) const;
};

bool operator==(const VisitRecord& a, const VisitRecord& b);

nlohmann::json to_json(const PatientProfile& p);
PatientProfile profile_from_json(const nlohmann::json& j);

// Plain-text block for prompts.
std::string render_profile(const PatientProfile& p);

// Ids made of letters, digits, '_' and '-'.
bool valid_patient_id(std::string_view id);

// One JSON file per patient under `dir`, replaced atomically on upsert.
class ProfileStore {
 public:
  explicit ProfileStore(std::filesystem::path dir);

  void upsert(const PatientProfile& profile);
  PatientProfile get(std::string_view id) const;  // NotFound
  bool contains(std::string_view id) const;
  std::vector<std::string> ids() const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path_for(std::string_view id) const;

  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

}  // namespace medaide::coordinator
