#include "slsh/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace slsh {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
    throw DataError(path + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string field;
    while (std::getline(ss, field, sep)) out.push_back(field);
    return out;
}

void parse_header(const std::string& path, const std::string& line, Dataset& ds) {
    // e.g. "# kind=tokens universe=100"
    std::stringstream ss(line.substr(1));
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        if (key == "kind") {
            if (value == "dense") ds.kind = ElementKind::Dense;
            else if (value == "bits") ds.kind = ElementKind::Bits;
            else if (value == "tokens") ds.kind = ElementKind::Tokens;
            else fail(path, 1, "unknown element kind '" + value + "'");
        } else if (key == "dim") {
            ds.dim = std::stoull(value);
        } else if (key == "universe") {
            ds.universe = std::stoull(value);
        }
    }
    if (ds.kind == ElementKind::Tokens && ds.universe == 0)
        fail(path, 1, "token datasets need universe=<n> in the header");
}

Dataset parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open");
    Dataset ds;
    std::string line;
    std::size_t lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (saw_header || ds.size() > 0)
                fail(path, lineno, "header must be the first line");
            parse_header(path, line, ds);
            saw_header = true;
            continue;
        }
        switch (ds.kind) {
            case ElementKind::Dense: {
                const auto fields = split(line, ',');
                Point p;
                p.reserve(fields.size());
                for (const auto& f : fields) {
                    try {
                        p.push_back(std::stod(trim(f)));
                    } catch (const std::logic_error&) {
                        fail(path, lineno, "malformed value '" + trim(f) + "'");
                    }
                    if (!std::isfinite(p.back()))
                        fail(path, lineno, "non-finite value");
                }
                if (p.empty()) fail(path, lineno, "empty row");
                if (ds.dim == 0) ds.dim = p.size();
                if (p.size() != ds.dim)
                    fail(path, lineno,
                         "dimension " + std::to_string(p.size()) + " != " +
                             std::to_string(ds.dim));
                ds.dense.push_back(std::move(p));
                break;
            }
            case ElementKind::Bits: {
                BitVector bv;
                bv.bits.reserve(line.size());
                for (char ch : line) {
                    if (ch == '0' || ch == '1')
                        bv.bits.push_back(static_cast<std::uint8_t>(ch - '0'));
                    else if (ch != ' ')
                        fail(path, lineno, "bit rows may contain only 0 and 1");
                }
                if (ds.dim == 0) ds.dim = bv.size();
                if (bv.size() != ds.dim)
                    fail(path, lineno, "bit length " + std::to_string(bv.size()) +
                                           " != " + std::to_string(ds.dim));
                ds.bits.push_back(std::move(bv));
                break;
            }
            case ElementKind::Tokens: {
                TokenSet ts;
                for (const auto& f : split(line, ',')) {
                    try {
                        ts.tokens.push_back(std::stoull(trim(f)));
                    } catch (const std::logic_error&) {
                        fail(path, lineno, "malformed token '" + trim(f) + "'");
                    }
                    if (ts.tokens.back() >= ds.universe)
                        fail(path, lineno, "token outside the declared universe");
                }
                std::sort(ts.tokens.begin(), ts.tokens.end());
                ts.tokens.erase(std::unique(ts.tokens.begin(), ts.tokens.end()),
                                ts.tokens.end());
                ds.tokens.push_back(std::move(ts));
                break;
            }
        }
    }
    return ds;
}

Dataset parse_fvecs(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open");
    Dataset ds;
    ds.kind = ElementKind::Dense;
    std::size_t offset = 0;
    while (true) {
        std::int32_t d = 0;
        in.read(reinterpret_cast<char*>(&d), sizeof(d));
        if (in.gcount() == 0) break;
        if (in.gcount() != sizeof(d))
            throw DataError(path + ": truncated header at offset " +
                            std::to_string(offset));
        if (d <= 0)
            throw DataError(path + ": bad dimension at offset " + std::to_string(offset));
        std::vector<float> raw(static_cast<std::size_t>(d));
        in.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(raw.size() * sizeof(float)));
        if (static_cast<std::size_t>(in.gcount()) != raw.size() * sizeof(float))
            throw DataError(path + ": truncated vector at offset " +
                            std::to_string(offset));
        Point p(raw.begin(), raw.end());
        for (double v : p)
            if (!std::isfinite(v))
                throw DataError(path + ": non-finite value at offset " +
                                std::to_string(offset));
        if (ds.dim == 0) ds.dim = p.size();
        if (p.size() != ds.dim)
            throw DataError(path + ": inconsistent dimension at offset " +
                            std::to_string(offset));
        ds.dense.push_back(std::move(p));
        offset += sizeof(d) + raw.size() * sizeof(float);
    }
    return ds;
}

}  // namespace

Dataset parse_dataset(const std::string& path, std::optional<DatasetFormat> format) {
    DatasetFormat f;
    if (format) {
        f = *format;
    } else {
        const bool binary = path.size() >= 6 && path.rfind(".fvecs") == path.size() - 6;
        f = binary ? DatasetFormat::Fvecs : DatasetFormat::Csv;
    }
    return f == DatasetFormat::Csv ? parse_csv(path) : parse_fvecs(path);
}

}  // namespace slsh
