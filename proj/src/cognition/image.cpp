// Copyright 2026 The SAR Gateway Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sar/cognition/image.hpp"

#include <fstream>
#include <string>

namespace sar {

void Image::validate() const {
  if (width == 0 || height == 0) throw InvalidImage("image dimensions must be positive");
  auto expected = std::uint64_t{width} * height * 3;
  if (rgb.size() != expected) {
    throw InvalidImage("expected " + std::to_string(expected) + " RGB bytes, got " +
                       std::to_string(rgb.size()));
  }
}

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidImage("cannot open " + path.string());
  std::string magic;
  unsigned maxval = 0;
  Image img;
  in >> magic >> img.width >> img.height >> maxval;
  if (!in || magic != "P6" || maxval != 255) throw InvalidImage(path.string() + " is not a P6 PPM");
  in.get();
  img.rgb.resize(std::size_t{img.width} * img.height * 3);
  in.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
  if (!in) throw InvalidImage(path.string() + " is truncated");
  return img;
}

void write_ppm(const std::filesystem::path& path, const Image& image) {
  image.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidImage("cannot write " + path.string());
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.rgb.data()), static_cast<std::streamsize>(image.rgb.size()));
}

}  // namespace sar
