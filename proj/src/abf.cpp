#include "actspec/abf.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"

namespace actspec {
namespace {

constexpr std::array<char, 4> kMagic = {'A', 'B', 'F', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b.data(), b.size());
}

void put_f64(std::ostream& os, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b.data(), b.size());
}

void read_exact(std::istream& is, char* dst, std::size_t len, const char* what) {
  is.read(dst, static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(is.gcount()) != len) {
    throw FormatError(std::string("ABF: truncated ") + what);
  }
}

std::uint32_t get_u32(std::istream& is, const char* what) {
  std::array<unsigned char, 4> b{};
  read_exact(is, reinterpret_cast<char*>(b.data()), b.size(), what);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[i]} << (8 * i);
  return v;
}

double get_f64(std::istream& is, const char* what) {
  std::array<unsigned char, 8> b{};
  read_exact(is, reinterpret_cast<char*>(b.data()), b.size(), what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return std::bit_cast<double>(v);
}

BitPattern pattern_from_bit_string(const std::string& s) {
  BitPattern p(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      p.set_sign(i, 1);
    } else if (s[i] != '0') {
      throw FormatError("ABF jsonl: pattern must be a string of '0'/'1'");
    }
  }
  return p;
}

std::string pattern_to_bit_string(const BitPattern& p) {
  std::string s(p.dimension(), '0');
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (p.positive(i)) s[i] = '1';
  }
  return s;
}

ActivationDataset make_dataset(std::size_t n, std::vector<Record> records) {
  try {
    return ActivationDataset(n, std::move(records));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("ABF: invalid dataset: ") + e.what());
  }
}

}  // namespace

void write_abf(const ActivationDataset& ds, std::ostream& sink) {
  sink.write(kMagic.data(), kMagic.size());
  put_u32(sink, static_cast<std::uint32_t>(ds.dimension()));
  put_u32(sink, static_cast<std::uint32_t>(ds.size()));
  for (const auto& r : ds.records()) {
    const auto bytes = r.pattern.to_bytes();
    sink.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    put_f64(sink, r.value);
    put_f64(sink, r.weight);
  }
  if (!sink) throw std::runtime_error("ABF: write failed");
}

ActivationDataset read_abf(std::istream& source) {
  std::array<char, 4> magic{};
  read_exact(source, magic.data(), magic.size(), "header");
  if (magic != kMagic) throw FormatError("ABF: bad magic");
  const std::size_t n = get_u32(source, "header");
  const std::size_t count = get_u32(source, "header");
  if (n == 0) throw FormatError("ABF: dimension 0");
  const std::size_t nbytes = (n + 7) / 8;
  std::vector<Record> records;
  records.reserve(count);
  std::vector<std::uint8_t> buf(nbytes);
  for (std::size_t r = 0; r < count; ++r) {
    read_exact(source, reinterpret_cast<char*>(buf.data()), nbytes, "record");
    Record rec;
    try {
      rec.pattern = BitPattern::from_bytes(n, buf);
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("ABF: ") + e.what());
    }
    rec.value = get_f64(source, "record");
    rec.weight = get_f64(source, "record");
    if (!std::isfinite(rec.value)) throw FormatError("ABF: non-finite value in record " + std::to_string(r));
    records.push_back(std::move(rec));
  }
  return make_dataset(n, std::move(records));
}

void write_abf_jsonl(const ActivationDataset& ds, std::ostream& sink) {
  nlohmann::json header = {{"format", "ABF1"}, {"n", ds.dimension()}, {"count", ds.size()}};
  sink << header.dump() << '\n';
  for (const auto& r : ds.records()) {
    nlohmann::json line = {{"pattern", pattern_to_bit_string(r.pattern)}, {"value", r.value}, {"weight", r.weight}};
    sink << line.dump() << '\n';
  }
}

ActivationDataset read_abf_jsonl(std::istream& source) {
  std::string line;
  if (!std::getline(source, line)) throw FormatError("ABF jsonl: missing header");
  std::size_t n = 0;
  std::size_t count = 0;
  try {
    const auto header = nlohmann::json::parse(line);
    if (header.at("format") != "ABF1") throw FormatError("ABF jsonl: bad magic");
    n = header.at("n").get<std::size_t>();
    count = header.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("ABF jsonl: bad header: ") + e.what());
  }
  if (n == 0) throw FormatError("ABF: dimension 0");
  std::vector<Record> records;
  records.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    if (!std::getline(source, line)) throw FormatError("ABF jsonl: truncated record");
    try {
      const auto obj = nlohmann::json::parse(line);
      Record rec;
      rec.pattern = pattern_from_bit_string(obj.at("pattern").get<std::string>());
      if (rec.pattern.dimension() != n) throw FormatError("ABF jsonl: pattern length differs from n");
      rec.value = obj.at("value").get<double>();
      rec.weight = obj.value("weight", 1.0);
      records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("ABF jsonl: bad record: ") + e.what());
    }
  }
  return make_dataset(n, std::move(records));
}

void save_dataset(const ActivationDataset& ds, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (path.extension() == ".jsonl") {
    write_abf_jsonl(ds, os);
  } else {
    write_abf(ds, os);
  }
}

ActivationDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  return path.extension() == ".jsonl" ? read_abf_jsonl(is) : read_abf(is);
}

}  // namespace actspec
