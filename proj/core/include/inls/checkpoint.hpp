#pragma once

#include <string>
#include <utility>
#include <vector>

#include "inls/field.hpp"

namespace inls {

using HeaderEntries = std::vector<std::pair<std::string, std::string>>;

struct Checkpoint {
  Field field;
  HeaderEntries extra;  // header keys beyond params, geometry and time

  const std::string* find(const std::string& key) const;
};

// %.17g, round-trips every finite double
std::string format_double(double v);
double parse_double(const std::string& text, const std::string& context);

// `key = value` header, then one `re im` line per sample
void write_checkpoint(const std::string& path, const Field& field, const HeaderEntries& extra = {});
Checkpoint read_checkpoint(const std::string& path);

}  // namespace inls
