#include "amusic/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "amusic/error.hpp"

namespace amusic {

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(const std::vector<unsigned char>& bytes, std::size_t& at) {
  for (;;) {
    while (at < bytes.size() && std::isspace(bytes[at])) ++at;
    if (at < bytes.size() && bytes[at] == '#') {
      while (at < bytes.size() && bytes[at] != '\n') ++at;
      continue;
    }
    break;
  }
  std::string tok;
  while (at < bytes.size() && !std::isspace(bytes[at]) && bytes[at] != '#') {
    tok.push_back(static_cast<char>(bytes[at++]));
  }
  return tok;
}

long parse_positive(const std::string& tok, const std::filesystem::path& path) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) {
    throw Error(ErrorCode::BadImage, path.string() + ": bad PGM header token '" + tok + "'");
  }
  const long v = std::stol(tok);
  if (v <= 0) throw Error(ErrorCode::BadImage, path.string() + ": non-positive header value");
  return v;
}

}  // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  std::size_t at = 0;
  if (next_token(bytes, at) != "P5") {
    throw Error(ErrorCode::BadImage, path.string() + ": not a binary PGM (P5)");
  }
  const long width = parse_positive(next_token(bytes, at), path);
  const long height = parse_positive(next_token(bytes, at), path);
  const long maxval = parse_positive(next_token(bytes, at), path);
  if (maxval > 255) {
    throw Error(ErrorCode::BadImage, path.string() + ": only 8-bit PGM is supported");
  }
  ++at;  // single whitespace after maxval
  const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < at + need) {
    throw Error(ErrorCode::TruncatedFile, path.string() + ": pixel data ends at byte offset " +
                                              std::to_string(bytes.size()));
  }
  GrayImage img(height, width);
  for (long y = 0; y < height; ++y) {
    for (long x = 0; x < width; ++x) {
      img(y, x) = static_cast<float>(bytes[at++]) / static_cast<float>(maxval);
    }
  }
  return img;
}

void save_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  for (Index y = 0; y < image.rows(); ++y) {
    for (Index x = 0; x < image.cols(); ++x) {
      const float v = std::clamp(image(y, x), 0.0f, 1.0f);
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0f))));
    }
  }
}

GrayImage resize_bilinear(const GrayImage& image, Index width, Index height) {
  if (image.size() == 0) throw Error(ErrorCode::BadImage, "empty image");
  if (image.cols() == width && image.rows() == height) return image;
  GrayImage out(height, width);
  const double sx = static_cast<double>(image.cols()) / static_cast<double>(width);
  const double sy = static_cast<double>(image.rows()) / static_cast<double>(height);
  for (Index y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(image.rows() - 1));
    const Index y0 = static_cast<Index>(fy);
    const Index y1 = std::min<Index>(y0 + 1, image.rows() - 1);
    const double wy = fy - static_cast<double>(y0);
    for (Index x = 0; x < width; ++x) {
      const double fx =
          std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(image.cols() - 1));
      const Index x0 = static_cast<Index>(fx);
      const Index x1 = std::min<Index>(x0 + 1, image.cols() - 1);
      const double wx = fx - static_cast<double>(x0);
      const double top = (1 - wx) * image(y0, x0) + wx * image(y0, x1);
      const double bot = (1 - wx) * image(y1, x0) + wx * image(y1, x1);
      out(y, x) = static_cast<float>((1 - wy) * top + wy * bot);
    }
  }
  return out;
}

std::vector<std::filesystem::path> list_files_sorted(const std::filesystem::path& dir,
                                                     const std::string& ext) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::IoError, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

}  // namespace amusic
