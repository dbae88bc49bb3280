#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rgbdt/types.hpp"

namespace rgbdt {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline double parse_number(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
        throw ValidationError("config: bad numeric value '" + value + "' for " + key);
    }
    return v;
}

inline int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw ValidationError("config: " + key + " must be an integer, got '" + value + "'");
    }
    return i;
}

}  // namespace detail

// Config files are plain "key = value" lines mirroring the PipelineConfig
// field names. Blank lines and '#' comments are ignored; every key is
// optional and missing keys keep their defaults.
inline PipelineConfig parse_config_text(const std::string& text) {
    PipelineConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key == "window_n") {
            config.window_n = detail::parse_int(key, value);
        } else if (key == "foreground_threshold") {
            config.foreground_threshold = detail::parse_number(key, value);
        } else if (key == "sigma_floor") {
            config.sigma_floor = detail::parse_number(key, value);
        } else if (key == "thermal_bandwidth_factor") {
            config.thermal_bandwidth_factor = detail::parse_number(key, value);
        } else if (key == "min_blob_area") {
            config.min_blob_area = detail::parse_int(key, value);
        } else if (key == "opening_radius") {
            config.opening_radius = detail::parse_int(key, value);
        } else if (key == "depth_max") {
            config.depth_max = detail::parse_int(key, value);
        } else {
            throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" +
                                  key + "'");
        }
    }
    return config;
}

inline PipelineConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

inline std::string config_to_text(const PipelineConfig& config) {
    std::ostringstream out;
    out.precision(17);
    out << "window_n = " << config.window_n << "\n";
    out << "foreground_threshold = " << config.foreground_threshold << "\n";
    out << "sigma_floor = " << config.sigma_floor << "\n";
    out << "thermal_bandwidth_factor = " << config.thermal_bandwidth_factor << "\n";
    out << "min_blob_area = " << config.min_blob_area << "\n";
    out << "opening_radius = " << config.opening_radius << "\n";
    out << "depth_max = " << config.depth_max << "\n";
    return out.str();
}

inline void save_config_file(const PipelineConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write config file " + path.string());
    }
    out << config_to_text(config);
}

}  // namespace rgbdt
