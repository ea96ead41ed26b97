#include "medaide/coordinator/profile.hpp"

#include <algorithm>

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"
#include "medaide/common/text.hpp"

namespace medaide::coordinator {

bool operator==(const VisitRecord& a, const VisitRecord& b) { return a.date == b.date && a.summary == b.summary; }

bool PatientProfile::operator==(const PatientProfile& o) const {
  return id == o.id && demographics == o.demographics && allergies == o.allergies && medications == o.medications &&
         visits == o.visits;
}

nlohmann::json to_json(const PatientProfile& p) {
  nlohmann::json visits = nlohmann::json::array();
  for (const auto& v : p.visits) visits.push_back({{"date", v.date}, {"summary", v.summary}});
  return nlohmann::json{{"id", p.id},
                        {"demographics", p.demographics},
                        {"allergies", p.allergies},
                        {"medications", p.medications},
                        {"visits", visits}};
}

PatientProfile profile_from_json(const nlohmann::json& j) {
  PatientProfile p;
  p.id = j.at("id").get<std::string>();
  p.demographics = j.value("demographics", std::map<std::string, std::string>{});
  p.allergies = j.value("allergies", std::vector<std::string>{});
  p.medications = j.value("medications", std::vector<std::string>{});
  for (const auto& v : j.value("visits", nlohmann::json::array())) {
    p.visits.push_back({v.value("date", std::string()), v.value("summary", std::string())});
  }
  return p;
}

std::string render_profile(const PatientProfile& p) {
  std::string out = "Patient " + p.id + "\n";
  for (const auto& [k, v] : p.demographics) out += k + ": " + v + "\n";
  out += "Allergies: " + (p.allergies.empty() ? std::string("none recorded") : text::join(p.allergies, ", ")) + "\n";
  out += "Medications: " + (p.medications.empty() ? std::string("none recorded") : text::join(p.medications, ", ")) +
         "\n";
  for (const auto& v : p.visits) out += "Visit " + v.date + ": " + v.summary + "\n";
  return out;
}

bool valid_patient_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

ProfileStore::ProfileStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path ProfileStore::path_for(std::string_view id) const {
  if (!valid_patient_id(id)) throw Error(ErrorCode::kInvalidArgument, "invalid patient id '" + std::string(id) + "'");
  return dir_ / (std::string(id) + ".json");
}

void ProfileStore::upsert(const PatientProfile& profile) {
  const auto path = path_for(profile.id);
  const auto body = to_json(profile).dump(2) + "\n";
  std::lock_guard lock(mu_);
  io::write_file_atomic(path, body);
}

PatientProfile ProfileStore::get(std::string_view id) const {
  const auto path = path_for(id);
  std::lock_guard lock(mu_);
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kNotFound, "no profile for patient '" + std::string(id) + "'");
  try {
    return profile_from_json(nlohmann::json::parse(io::read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
}

bool ProfileStore::contains(std::string_view id) const {
  std::lock_guard lock(mu_);
  return std::filesystem::exists(path_for(id));
}

std::vector<std::string> ProfileStore::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  if (!std::filesystem::exists(dir_)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace medaide::coordinator
