#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace richcore::cli {

/// Streaming JSON emitter. Doubles are printed with 17 significant digits so
/// every value round-trips exactly; non-finite values become null.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& value(bool v);
  JsonWriter& null();

  const std::string& str() const { return out_; }

 private:
  void separate();

  std::string out_;
  std::vector<bool> first_in_scope_;
  bool pending_key_ = false;
};

std::string format_double(double v);

}  // namespace richcore::cli
