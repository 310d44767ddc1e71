#include "nslab/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nslab {

std::string format_full(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

RunConfigFile parse_run_config_text(const std::string& text) {
    RunConfigFile out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config line " + std::to_string(lineno) + " is not key=value: '" + line +
                        "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error("config line " + std::to_string(lineno) + " has an empty key or value");
        out.echo[key] = value;

        try {
            if (key == "n") out.config.n = std::stoi(value);
            else if (key == "length") out.config.length = std::stod(value);
            else if (key == "nu") out.config.nu = std::stod(value);
            else if (key == "dt") out.config.dt = std::stod(value);
            else if (key == "t-final") out.config.t_final = std::stod(value);
            else if (key == "scheme") out.config.scheme = parse_scheme(value);
            else if (key == "dealias") out.config.dealias = parse_dealias(value);
            else if (key == "init") out.config.init = value;
            else if (key == "output-every") out.config.output_every = std::stoi(value);
            else if (key == "seed") out.config.seed = std::stoull(value);
            else if (key == "out-dir") out.out_dir = value;
            else
                throw Error("unknown config key '" + key + "'");
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error("config line " + std::to_string(lineno) + ": invalid value '" + value +
                        "' for key '" + key + "'");
        }
    }
    out.config.validate();
    return out;
}

RunConfigFile parse_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config_text(buffer.str());
}

}  // namespace nslab
