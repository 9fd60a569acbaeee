#pragma once

#include <map>
#include <string>
#include <vector>

#include "mvpoly.hpp"

namespace permtri {

// The corpus of named constant polynomials shipped under data/corpus: one
// polynomial per file ("name: <id> vars: <list>" header, then the canonical
// serialization), digest-pinned by the MANIFEST file so drift fails loudly.
class Catalog {
 public:
  struct Entry {
    std::vector<std::string> declared_vars;
    MvPoly poly;
    uint64_t digest = 0;
  };

  static Catalog load(const std::string& dir);

  bool has(const std::string& name) const { return entries_.count(name) != 0; }
  const MvPoly& get(const std::string& name) const;
  const Entry& entry(const std::string& name) const;
  std::vector<std::string> names() const;
  const std::string& dir() const { return dir_; }

  // Round-trips every entry through parse/serialize; returns failures.
  std::vector<std::string> roundtrip_failures() const;

  static uint64_t file_digest(const std::string& path);

 private:
  std::string dir_;
  std::map<std::string, Entry> entries_;
  std::map<std::string, std::string> texts_;  // name -> serialized body
  friend class CatalogTestPeer;
};

// Compile-time default corpus location (source tree); overridable per call.
std::string default_corpus_dir();

}  // namespace permtri
