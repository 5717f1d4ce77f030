#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <boost/version.hpp>
#include <json.hpp>

#include "common.hpp"
#include "rational.hpp"

namespace digitdist
{
    using Json = nlohmann::ordered_json;

    inline constexpr const char* library_version = "0.1.0";
    inline constexpr const char* schema_name = "digitdist.v1";

    // Integers above 2^53 travel as decimal strings.
    inline Json jint(std::uint64_t v)
    {
        if (v > (1ULL << 53))
            return std::to_string(v);
        return v;
    }

    inline Json jint(const BigInt& v)
    {
        BigInt lim = BigInt(1) << 53;
        if (v > lim || v < -lim)
            return v.str();
        return v.convert_to<long long>();
    }

    inline Json jrat(const Rational& v) { return to_string(v); }

    // Non-finite doubles have no JSON form.
    inline Json jnum(double v)
    {
        if (!std::isfinite(v))
            return nullptr;
        return v;
    }

    inline Json make_document(const std::string& command, std::uint64_t seed, Json inputs, Json outputs)
    {
        Json doc;
        doc["schema"] = schema_name;
        doc["command"] = command;
        doc["versions"] = {{"digitdist", library_version},
                           {"boost", BOOST_LIB_VERSION},
                           {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                 std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                 std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
        doc["seed"] = jint(seed);
        doc["inputs"] = std::move(inputs);
        doc["outputs"] = std::move(outputs);
        return doc;
    }

    inline std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

    // Throws precondition_error when the text is not a valid document.
    inline Json read_document(const std::string& text)
    {
        Json doc;
        try
        {
            doc = Json::parse(text);
        }
        catch (const std::exception& e)
        {
            throw precondition_error(std::string("document is not JSON: ") + e.what());
        }
        require(doc.is_object(), "document must be an object");
        require(doc.contains("schema") && doc["schema"] == schema_name, "unknown schema");
        require(doc.contains("command") && doc["command"].is_string(), "command missing");
        require(doc.contains("versions") && doc["versions"].is_object(), "versions missing");
        require(doc.contains("seed") && (doc["seed"].is_number_unsigned() || doc["seed"].is_string()), "seed missing");
        require(doc.contains("inputs") && doc["inputs"].is_object(), "inputs missing");
        require(doc.contains("outputs") && doc["outputs"].is_object(), "outputs missing");
        return doc;
    }

    struct Table
    {
        std::string command;
        std::uint64_t seed = 0;
        std::vector<std::pair<std::string, std::string>> meta;  // extra header lines
        std::vector<std::string> columns;
        std::vector<std::vector<std::string>> rows;
    };

    inline std::string csv_double(double v)
    {
        if (!std::isfinite(v))
            return "";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    inline std::string dump_table(const Table& t)
    {
        std::ostringstream os;
        os << "# schema=" << schema_name << '\n';
        os << "# command=" << t.command << '\n';
        os << "# version=" << library_version << '\n';
        os << "# seed=" << t.seed << '\n';
        for (const auto& [k, v] : t.meta)
            os << "# " << k << '=' << v << '\n';
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& r : t.rows)
        {
            for (std::size_t i = 0; i < r.size(); ++i)
                os << (i ? "," : "") << r[i];
            os << '\n';
        }
        return os.str();
    }

    inline Table read_table(const std::string& text)
    {
        Table t;
        std::istringstream is(text);
        std::string line;
        bool schema = false, header = false;
        while (std::getline(is, line))
        {
            if (line.rfind("# ", 0) == 0)
            {
                require(!header, "comment after the header row");
                auto eq = line.find('=');
                require(eq != std::string::npos, "malformed header line");
                std::string k = line.substr(2, eq - 2), v = line.substr(eq + 1);
                if (k == "schema")
                {
                    require(v == schema_name, "unknown schema");
                    schema = true;
                }
                else if (k == "command")
                    t.command = v;
                else if (k == "seed")
                    t.seed = std::stoull(v);
                else if (k != "version")
                    t.meta.emplace_back(k, v);
                continue;
            }
            std::vector<std::string> cells;
            std::string cell;
            std::istringstream ls(line);
            while (std::getline(ls, cell, ','))
                cells.push_back(cell);
            if (!line.empty() && line.back() == ',')
                cells.emplace_back();
            if (!header)
            {
                t.columns = cells;
                header = true;
            }
            else
            {
                require(cells.size() == t.columns.size(), "row width does not match the header");
                t.rows.push_back(cells);
            }
        }
        require(schema && header && !t.command.empty(), "table is missing its schema, command or header");
        return t;
    }

    // Minimal polyline plot.
    inline std::string svg_plot(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& xlabel,
                                const std::string& ylabel)
    {
        require(xs.size() == ys.size() && xs.size() >= 2, "plot needs at least two points");
        const double W = 640, H = 400, pad = 60;
        double x0 = xs.front(), x1 = xs.front(), y0 = ys.front(), y1 = ys.front();
        for (std::size_t i = 0; i < xs.size(); ++i)
        {
            x0 = std::min(x0, xs[i]);
            x1 = std::max(x1, xs[i]);
            y0 = std::min(y0, ys[i]);
            y1 = std::max(y1, ys[i]);
        }
        if (x1 == x0)
            x1 = x0 + 1;
        if (y1 == y0)
            y1 = y0 + 1;
        auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
        auto py = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };
        std::ostringstream os;
        os.precision(6);
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
        os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
           << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
           << "\" stroke=\"black\"/>\n";
        os << "<polyline fill=\"none\" stroke=\"black\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i)
            os << (i ? " " : "") << px(xs[i]) << ',' << py(ys[i]);
        os << "\"/>\n";
        os << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
        os << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2
           << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
        os << "<text x=\"" << pad << "\" y=\"" << H - pad + 18 << "\">" << x0 << "</text>\n";
        os << "<text x=\"" << W - pad << "\" y=\"" << H - pad + 18 << "\" text-anchor=\"end\">" << x1 << "</text>\n";
        os << "<text x=\"" << pad - 5 << "\" y=\"" << H - pad << "\" text-anchor=\"end\">" << y0 << "</text>\n";
        os << "<text x=\"" << pad - 5 << "\" y=\"" << pad << "\" text-anchor=\"end\">" << y1 << "</text>\n";
        os << "</svg>\n";
        return os.str();
    }

    // Edge list: "r0 r1 phase count" per line, lexicographically sorted.
    struct EdgeLine
    {
        std::uint64_t r0, r1, phase, count;
        auto operator<=>(const EdgeLine&) const = default;
    };

    inline std::vector<EdgeLine> read_edge_list(const std::string& text)
    {
        std::vector<EdgeLine> out;
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line))
        {
            std::istringstream ls(line);
            EdgeLine e{};
            std::string extra;
            require(static_cast<bool>(ls >> e.r0 >> e.r1 >> e.phase >> e.count) && !(ls >> extra),
                    "malformed edge line: " + line);
            require(out.empty() || out.back() < e, "edge list not strictly sorted");
            out.push_back(e);
        }
        return out;
    }
}
