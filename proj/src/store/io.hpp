#pragma once

#include <string>

#include "store/store.hpp"

namespace socsim {

enum class ExportFormat { csv, jsonl };

// Table files in a directory, one per table, fixed column order. Exports are
// deterministic: two stores with equal contents produce byte-identical files.
struct StoreIo {
  static bool export_tables(const Store& store, const std::string& dir,
                            ExportFormat format, std::string* error);
  // Loads table files written by export_tables into an open (empty) store and
  // rebuilds all derived indexes. Format is detected from file extensions.
  static bool import_tables(Store& store, const std::string& dir, std::string* error);

  // Snapshot = jsonl export + meta.json (seed, rec-cache mode).
  static bool snapshot(const Store& store, const std::string& dir, std::string* error);
  static bool restore(Store& store, const std::string& dir, std::string* error);
};

// Table names in export order.
extern const char* const kTableNames[11];

}  // namespace socsim
