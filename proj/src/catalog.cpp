#include "catalog.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "util.hpp"

#ifndef PERMTRI_CORPUS_DIR
#define PERMTRI_CORPUS_DIR "data/corpus"
#endif

namespace permtri {

std::string default_corpus_dir() {
  if (const char* env = std::getenv("PERMTRI_CORPUS_DIR")) return env;
  return PERMTRI_CORPUS_DIR;
}

uint64_t Catalog::file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open corpus file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return fnv1a64(ss.str());
}

Catalog Catalog::load(const std::string& dir) {
  Catalog cat;
  cat.dir_ = dir;
  std::ifstream mf(dir + "/MANIFEST");
  if (!mf) throw DomainError("cannot open corpus manifest: " + dir + "/MANIFEST");
  std::string name, hexdigest;
  while (mf >> name >> hexdigest) {
    std::string path = dir + "/" + name + ".poly";
    uint64_t want = std::stoull(hexdigest, nullptr, 16);
    uint64_t got = file_digest(path);
    if (got != want) {
      std::ostringstream os;
      os << "corpus drift: " << name << ".poly digest " << std::hex << got << " != manifest "
         << want;
      throw DomainError(os.str());
    }
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    // "name: <id> vars: <v1> <v2> ..."
    std::istringstream hs(header);
    std::string kw, id, vkw;
    hs >> kw >> id >> vkw;
    if (kw != "name:" || vkw != "vars:" || id != name)
      throw ParseError("bad corpus header in " + path + ": '" + header + "'");
    Entry e;
    e.digest = got;
    std::string v;
    while (hs >> v) e.declared_vars.push_back(v);
    std::string body, line;
    while (std::getline(in, line)) body += line;
    e.poly = MvPoly::parse(body, e.declared_vars);
    cat.texts_[name] = body;
    cat.entries_[name] = std::move(e);
  }
  if (cat.entries_.empty()) throw DomainError("empty corpus manifest: " + dir);
  return cat;
}

const MvPoly& Catalog::get(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw DomainError("missing corpus entry: " + name);
  return it->second.poly;
}

const Catalog::Entry& Catalog::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw DomainError("missing corpus entry: " + name);
  return it->second;
}

std::vector<std::string> Catalog::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [n, e] : entries_) out.push_back(n);
  return out;
}

std::vector<std::string> Catalog::roundtrip_failures() const {
  std::vector<std::string> bad;
  for (const auto& [n, body] : texts_) {
    if (entries_.at(n).poly.serialize() != body) bad.push_back(n);
  }
  return bad;
}

}  // namespace permtri
