#include "tscnn/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tscnn/error.hpp"
#include "tscnn/rng.hpp"

namespace fs = std::filesystem;

namespace tscnn {

namespace {

// Replaces invalid UTF-8 sequences with U+FFFD so downstream consumers can
// assume well-formed text. 20NG contains latin-1 bytes in some messages.
std::string sanitize_utf8(const std::string& in) {
  static const char kReplacement[] = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  const std::size_t n = in.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(in[i]);
    std::size_t len;
    if (c < 0x80) {
      len = 1;
    } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
    } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
      len = 4;
    } else {
      out += kReplacement;
      ++i;
      continue;
    }
    if (i + len > n) {
      out += kReplacement;
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t j = 1; j < len; ++j) {
      if ((static_cast<unsigned char>(in[i + j]) & 0xC0) != 0x80) ok = false;
    }
    if (ok) {
      out.append(in, i, len);
      i += len;
    } else {
      out += kReplacement;
      ++i;
    }
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw DataError("unreadable file: " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return sanitize_utf8(ss.str());
}

std::string relative_id(const fs::path& p, const fs::path& root) {
  return fs::relative(p, root).generic_string();
}

// Loads <base>/<class dir>/<file> documents, sorted by relative path.
void load_class_dirs(const fs::path& base, const fs::path& root,
                     Partition partition, std::vector<RawDocument>& docs,
                     std::set<std::string>& classes) {
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(base)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  if (class_dirs.empty())
    throw DataError("no class directories under: " + base.string());
  std::sort(class_dirs.begin(), class_dirs.end());

  for (const auto& dir : class_dirs) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    if (files.empty()) throw DataError("empty class directory: " + dir.string());
    std::sort(files.begin(), files.end());
    const std::string label = dir.filename().string();
    classes.insert(label);
    for (const auto& f : files) {
      docs.push_back({relative_id(f, root), label, read_file(f), partition});
    }
  }
}

LabeledCorpus finalize(std::vector<RawDocument> docs,
                       const std::set<std::string>& classes) {
  std::sort(docs.begin(), docs.end(),
            [](const RawDocument& a, const RawDocument& b) { return a.id < b.id; });
  LabeledCorpus corpus;
  corpus.classes.assign(classes.begin(), classes.end());
  corpus.documents = std::move(docs);
  return corpus;
}

}  // namespace

int LabeledCorpus::class_index(const std::string& label) const {
  auto it = std::lower_bound(classes.begin(), classes.end(), label);
  if (it == classes.end() || *it != label)
    throw DataError("unknown class label: " + label);
  return static_cast<int>(it - classes.begin());
}

std::size_t LabeledCorpus::class_size(const std::string& label) const {
  std::size_t n = 0;
  for (const auto& d : documents)
    if (d.label == label) ++n;
  return n;
}

LabeledCorpus load_20newsgroups(const fs::path& root) {
  if (!fs::is_directory(root))
    throw DataError("missing dataset root: " + root.string());

  fs::path train_dir = root / "20news-bydate-train";
  fs::path test_dir = root / "20news-bydate-test";
  if (!fs::is_directory(train_dir) || !fs::is_directory(test_dir)) {
    // Fallback: any pair of directories ending in "train"/"test".
    train_dir.clear();
    test_dir.clear();
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root))
      if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
      const std::string name = d.filename().string();
      if (name.ends_with("train")) train_dir = d;
      if (name.ends_with("test")) test_dir = d;
    }
    if (train_dir.empty() || test_dir.empty())
      throw DataError("expected train/test partition directories under: " +
                      root.string());
  }

  std::vector<RawDocument> docs;
  std::set<std::string> classes;
  load_class_dirs(train_dir, root, Partition::Train, docs, classes);
  load_class_dirs(test_dir, root, Partition::Test, docs, classes);
  return finalize(std::move(docs), classes);
}

LabeledCorpus load_bbc(const fs::path& root) {
  if (!fs::is_directory(root))
    throw DataError("missing dataset root: " + root.string());
  fs::path base = fs::is_directory(root / "bbc") ? root / "bbc" : root;

  std::vector<RawDocument> docs;
  std::set<std::string> classes;
  load_class_dirs(base, root, Partition::None, docs, classes);
  return finalize(std::move(docs), classes);
}

DatasetSplit split(const LabeledCorpus& corpus, SplitSpec spec,
                   std::uint64_t seed) {
  DatasetSplit out;
  out.seed = seed;
  Rng rng(seed);

  for (const auto& cls : corpus.classes) {
    std::vector<std::string> pool;   // stratified: all class docs
    std::vector<std::string> fixed_test;
    for (const auto& d : corpus.documents) {
      if (d.label != cls) continue;
      if (spec == SplitSpec::PredefinedCarveValidation) {
        if (d.partition == Partition::Test)
          fixed_test.push_back(d.id);
        else
          pool.push_back(d.id);
      } else {
        pool.push_back(d.id);
      }
    }

    if (spec == SplitSpec::PredefinedCarveValidation) {
      if (pool.empty())
        throw DataError("class has no training documents: " + cls);
      rng.shuffle(pool);
      const std::size_t n_val = pool.size() / 10;  // floor(0.1 * |train_c|)
      for (std::size_t i = 0; i < pool.size(); ++i)
        (i < n_val ? out.validation : out.train).push_back(pool[i]);
      out.test.insert(out.test.end(), fixed_test.begin(), fixed_test.end());
    } else {
      const std::size_t n = pool.size();
      const std::size_t n_val = n / 10;          // floor(0.1 n)
      const std::size_t n_test = 3 * n / 10;     // floor(0.3 n)
      if (n_val == 0 || n_test == 0)
        throw DataError("class too small to split 60/10/30: " + cls);
      rng.shuffle(pool);
      for (std::size_t i = 0; i < n; ++i) {
        if (i < n_val)
          out.validation.push_back(pool[i]);
        else if (i < n_val + n_test)
          out.test.push_back(pool[i]);
        else
          out.train.push_back(pool[i]);
      }
    }
  }
  return out;
}

}  // namespace tscnn
