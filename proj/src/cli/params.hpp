#pragma once
#include <array>
#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"
#include "vfw/errors.hpp"
#include "vfw/vector3.hpp"

namespace vfw::cli_detail {

// Schema diagnostics carry the originating file and the JSON path of the
// offending field; they surface verbatim behind exit code 2.
[[noreturn]] void schema_fail(const std::string& origin, const std::string& path,
                              const std::string& what);

// Typed, path-reporting view of one JSON object.  The validators below use
// it to enforce the published schema at load time; the runners reuse the
// same getters afterwards, so a type confusion can never reach a module API.
class ParamReader {
 public:
  ParamReader(const nlohmann::json& obj, std::string origin, std::string path);

  const nlohmann::json& raw() const { return *obj_; }
  bool has(const std::string& key) const;
  // Rejects any key of the object that is not in the list.
  void allow_only(std::initializer_list<const char*> keys) const;

  double number(const std::string& key, double fallback) const;
  double number_req(const std::string& key) const;
  long integer(const std::string& key, long fallback) const;
  long integer_req(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::string text_req(const std::string& key) const;
  Vec3 vec3(const std::string& key, const Vec3& fallback) const;
  Vec3 vec3_req(const std::string& key) const;
  std::vector<double> numbers_req(const std::string& key) const;
  std::vector<Vec3> vec3_list_req(const std::string& key) const;
  // Scalar broadcast to three axes, or an explicit 3-array.
  std::array<int, 3> int_triple_req(const std::string& key) const;
  std::array<double, 3> number_triple_req(const std::string& key) const;
  ParamReader object_req(const std::string& key) const;

  [[noreturn]] void fail(const std::string& key, const std::string& what) const;
  const std::string& origin() const { return origin_; }

 private:
  const nlohmann::json& at(const std::string& key) const;
  double as_number(const nlohmann::json& v, const std::string& key) const;
  long as_integer(const nlohmann::json& v, const std::string& key) const;

  const nlohmann::json* obj_;
  std::string origin_, path_;
};

// Per-kind parameter schema; throws ScenarioError naming origin and field.
void validate_params(const std::string& kind, const nlohmann::json& params,
                     const std::string& origin);

}  // namespace vfw::cli_detail
