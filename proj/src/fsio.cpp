// SPDX-License-Identifier: Apache-2.0
#include "assertforge/fsio.hpp"

#include "assertforge/diag.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace assertforge::fsio {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& p) {
    std::string s = read_file(p);
    return std::vector<uint8_t>(s.begin(), s.end());
}

void write_file_atomic(const std::filesystem::path& p, std::string_view content) {
    namespace fs = std::filesystem;
    fs::path dir = p.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    std::random_device rd;
    fs::path tmp = p;
    tmp += ".tmp" + std::to_string(rd() % 1000000);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot create file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, p, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("rename failed for " + p.string() + ": " + ec.message());
    }
}

std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              const std::vector<std::string>& exts) {
    namespace fs = std::filesystem;
    std::vector<fs::path> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        if (!exts.empty()) {
            std::string ext = e.path().extension().string();
            if (std::find(exts.begin(), exts.end(), ext) == exts.end()) continue;
        }
        out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace assertforge::fsio
