#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgdheat/errors.hpp"
#include "pgdheat/pgd.hpp"
#include "pgdheat/version.hpp"

namespace pgdheat {

namespace {

static_assert(std::endian::native == std::endian::little,
              "model files assume little-endian float64 tables");

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string encode_doubles(const std::vector<double>& values)
{
    const auto* bytes = reinterpret_cast<const unsigned char*>(values.data());
    const std::size_t n = values.size() * sizeof(double);
    std::string out;
    out.reserve((n + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= n; i += 3) {
        const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out.push_back(kAlphabet[(v >> 18) & 63]);
        out.push_back(kAlphabet[(v >> 12) & 63]);
        out.push_back(kAlphabet[(v >> 6) & 63]);
        out.push_back(kAlphabet[v & 63]);
    }
    const std::size_t rem = n - i;
    if (rem == 1) {
        const unsigned v = bytes[i] << 16;
        out.push_back(kAlphabet[(v >> 18) & 63]);
        out.push_back(kAlphabet[(v >> 12) & 63]);
        out.push_back('=');
        out.push_back('=');
    } else if (rem == 2) {
        const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out.push_back(kAlphabet[(v >> 18) & 63]);
        out.push_back(kAlphabet[(v >> 12) & 63]);
        out.push_back(kAlphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::vector<double> decode_doubles(const std::string& text)
{
    std::array<int, 256> lut;
    lut.fill(-1);
    for (int i = 0; i < 64; ++i)
        lut[static_cast<unsigned char>(kAlphabet[i])] = i;

    std::vector<unsigned char> bytes;
    bytes.reserve(text.size() / 4 * 3);
    unsigned buffer = 0;
    int bits = 0;
    for (char c : text) {
        if (c == '=')
            break;
        const int v = lut[static_cast<unsigned char>(c)];
        if (v < 0)
            throw IoError("invalid base64 in model file");
        buffer = (buffer << 6) | static_cast<unsigned>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            bytes.push_back(static_cast<unsigned char>((buffer >> bits) & 0xff));
        }
    }
    if (bytes.size() % sizeof(double) != 0)
        throw IoError("model table byte count is not a multiple of 8");
    std::vector<double> out(bytes.size() / sizeof(double));
    std::memcpy(out.data(), bytes.data(), bytes.size());
    return out;
}

nlohmann::json domain_to_json(const ParameterDomain& d)
{
    return {{"lo", d.lo}, {"delta", d.delta}, {"count", d.count}};
}

ParameterDomain domain_from_json(const nlohmann::json& j)
{
    ParameterDomain d;
    d.lo = j.at("lo").get<double>();
    d.delta = j.at("delta").get<double>();
    d.count = j.at("count").get<int>();
    if (d.count < 2 || !(d.delta > 0.0))
        throw IoError("invalid parameter domain in model file");
    return d;
}

} // namespace

void save_pgd(const PgdModel& model, const std::filesystem::path& path)
{
    nlohmann::json j;
    j["format_version"] = kModelFormatVersion;
    j["kind"] = "pgd-model";
    j["a"] = model.a;
    j["bi_in"] = model.bi_in;
    j["bi_out"] = model.bi_out;
    j["basis_kind"] = to_string(model.basis_kind);
    j["grid"] = {{"kind", model.grid.kind == GridKind::Uniform ? "uniform" : "chebyshev-lobatto"},
                 {"nodes", encode_doubles(model.grid.nodes)}};
    j["domains"] = {{"b_in", domain_to_json(model.dom_b_in)},
                    {"b_out", domain_to_json(model.dom_b_out)}};
    auto& zdoms = j["domains"]["zbar"];
    zdoms = nlohmann::json::array();
    for (const auto& d : model.dom_zbar)
        zdoms.push_back(domain_to_json(d));
    j["ranges"] = {{"min", model.ranges.min}, {"max", model.ranges.max}};
    j["build"] = {{"seed", model.info.seed},
                  {"eps_fixed_point", model.info.criteria.eps_fixed_point},
                  {"eps_enrichment", model.info.criteria.eps_enrichment},
                  {"max_fixed_point_iters", model.info.criteria.max_fixed_point_iters},
                  {"max_modes", model.info.criteria.max_modes},
                  {"fixed_point_iters", model.info.fixed_point_iters},
                  {"fixed_point_converged", model.info.fixed_point_converged},
                  {"mode_amplitudes", model.info.mode_amplitudes}};
    auto& modes = j["modes"];
    modes = nlohmann::json::array();
    for (const auto& m : model.modes) {
        nlohmann::json jm;
        jm["space"] = encode_doubles(m.space);
        jm["bc_in"] = encode_doubles(m.bc_in);
        jm["bc_out"] = encode_doubles(m.bc_out);
        auto& coeff = jm["coeff"];
        coeff = nlohmann::json::array();
        for (const auto& g : m.coeff)
            coeff.push_back(encode_doubles(g));
        modes.push_back(std::move(jm));
    }

    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open for writing: " + path.string());
    os << j.dump() << '\n';
    if (!os)
        throw IoError("write failed: " + path.string());
}

PgdModel load_pgd(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open: " + path.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("corrupt model file " + path.string() + ": " + e.what());
    }
    const int version = j.value("format_version", -1);
    if (version != kModelFormatVersion)
        throw IoError("model format version " + std::to_string(version) + " not supported (expected " +
                      std::to_string(kModelFormatVersion) + "): " + path.string());
    if (j.value("kind", "") != std::string("pgd-model"))
        throw IoError("not a pgd model file: " + path.string());

    try {
        PgdModel model;
        model.a = j.at("a").get<double>();
        model.bi_in = j.at("bi_in").get<double>();
        model.bi_out = j.at("bi_out").get<double>();
        model.basis_kind = basis_kind_from_string(j.at("basis_kind").get<std::string>());
        const auto& grid = j.at("grid");
        model.grid.kind = grid.at("kind").get<std::string>() == "uniform"
                              ? GridKind::Uniform
                              : GridKind::ChebyshevLobatto;
        model.grid.nodes = decode_doubles(grid.at("nodes").get<std::string>());
        model.dom_b_in = domain_from_json(j.at("domains").at("b_in"));
        model.dom_b_out = domain_from_json(j.at("domains").at("b_out"));
        for (const auto& d : j.at("domains").at("zbar"))
            model.dom_zbar.push_back(domain_from_json(d));
        model.ranges.min = j.at("ranges").at("min").get<std::vector<double>>();
        model.ranges.max = j.at("ranges").at("max").get<std::vector<double>>();
        const auto& build = j.at("build");
        model.info.seed = build.at("seed").get<std::uint64_t>();
        model.info.criteria.eps_fixed_point = build.at("eps_fixed_point").get<double>();
        model.info.criteria.eps_enrichment = build.at("eps_enrichment").get<double>();
        model.info.criteria.max_fixed_point_iters = build.at("max_fixed_point_iters").get<int>();
        model.info.criteria.max_modes = build.at("max_modes").get<int>();
        model.info.fixed_point_iters = build.at("fixed_point_iters").get<std::vector<int>>();
        model.info.fixed_point_converged =
            build.at("fixed_point_converged").get<std::vector<std::uint8_t>>();
        model.info.mode_amplitudes = build.at("mode_amplitudes").get<std::vector<double>>();
        for (const auto& jm : j.at("modes")) {
            PgdMode m;
            m.space = decode_doubles(jm.at("space").get<std::string>());
            m.bc_in = decode_doubles(jm.at("bc_in").get<std::string>());
            m.bc_out = decode_doubles(jm.at("bc_out").get<std::string>());
            for (const auto& g : jm.at("coeff"))
                m.coeff.push_back(decode_doubles(g.get<std::string>()));
            model.modes.push_back(std::move(m));
        }

        const std::size_t nx = model.grid.size();
        const auto n_basis = model.dom_zbar.size();
        if (model.ranges.min.size() != n_basis || model.ranges.max.size() != n_basis)
            throw IoError("ranges length mismatch in " + path.string());
        for (const auto& m : model.modes) {
            if (m.space.size() != nx ||
                m.bc_in.size() != static_cast<std::size_t>(model.dom_b_in.count) ||
                m.bc_out.size() != static_cast<std::size_t>(model.dom_b_out.count) ||
                m.coeff.size() != n_basis)
                throw IoError("mode table shape mismatch in " + path.string());
            for (std::size_t jz = 0; jz < n_basis; ++jz)
                if (m.coeff[jz].size() != static_cast<std::size_t>(model.dom_zbar[jz].count))
                    throw IoError("coefficient table shape mismatch in " + path.string());
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("corrupt model file " + path.string() + ": " + e.what());
    }
}

} // namespace pgdheat
