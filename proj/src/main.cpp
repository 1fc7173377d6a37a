#include "CLI11.hpp"
#include "wtc/report.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

using namespace wtc;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

std::vector<long long> parse_list(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    return out;
}

std::string poly_str(const CycloPoly& f) {
    std::string s;
    for (int i = 0; i <= f.degree(); ++i) {
        if (i) s += " ";
        s += cyclo_str(f.coeff(i));
    }
    return s;
}

void print_report(std::ostream& os, int N, const std::string& eta, long long prime0,
                  const std::vector<DegreeEigenReport>& rep) {
    for (const auto& dr : rep) {
        os << "N=" << N << " eta=" << eta << " H^" << dr.degree << " dim=" << dr.hdim << "\n";
        for (const auto& b : dr.blocks) {
            os << "  block dim=" << b.dim;
            if (!b.label.empty()) os << " label=" << b.label;
            os << "\n";
            for (const auto& e : b.eigen) os << "    " << e << "\n";
            for (size_t pi = 0; pi < b.residual.size(); ++pi)
                if (b.residual[pi].degree() > 0)
                    os << "    residual[" << pi << "] " << poly_str(b.residual[pi]) << "\n";
        }
        (void)prime0;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"well-tempered complex toolkit"};
    app.require_subcommand(1);

    std::string store_dir = "stores";
    int n = 3;
    long long ell = 2;
    int k = 1, c = 80, jobs = 1, level = 1;
    std::string nebentype = "triv";
    std::string degrees = "0,1,2,3";
    std::string primes = "2";
    std::string levels = "2,3,4,5";

    auto* build = app.add_subcommand("build", "one-time construction of a well-tempered complex");
    build->add_option("--n", n);
    build->add_option("--ell", ell);
    build->add_option("--k", k);
    build->add_option("--vertex-count", c);
    build->add_option("--store-dir", store_dir);

    auto* verify = app.add_subcommand("verify", "recompute and compare a store's certificates");
    verify->add_option("--n", n);
    verify->add_option("--ell", ell);
    verify->add_option("--k", k);
    verify->add_option("--store-dir", store_dir);

    auto* hecke = app.add_subcommand("hecke", "Hecke eigensystems from existing stores");
    hecke->add_option("--n", n);
    hecke->add_option("--level", level)->required();
    hecke->add_option("--nebentype", nebentype);
    hecke->add_option("--degrees", degrees);
    hecke->add_option("--primes", primes);
    hecke->add_option("--store-dir", store_dir);
    hecke->add_option("--jobs", jobs);

    auto* table = app.add_subcommand("table", "eigensystem table over a level range");
    table->add_option("--n", n);
    table->add_option("--levels", levels);
    table->add_option("--primes", primes);
    table->add_option("--degrees", degrees);
    table->add_option("--store-dir", store_dir);
    table->add_option("--jobs", jobs);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(build)) {
            fs::create_directories(store_dir);
            fs::path p = fs::path(store_dir) / store_filename(n, ell, k);
            WTComplex w = build_wtc(HeckeDatum(n, ell, k), c);
            std::string text = store_serialize(w, orient_wtc(w));
            if (fs::exists(p)) {
                if (read_file(p) != text) {
                    std::cerr << "store exists and differs: " << p << "\n";
                    return 1;
                }
                std::cout << "store verified (unchanged): " << p << "\n";
            } else {
                write_file(p, text);
                std::cout << "store written: " << p << "\n";
            }
            std::cout << "critical temperaments: " << w.critical.size() << "\n";
            return 0;
        }
        if (app.got_subcommand(verify)) {
            fs::path p = fs::path(store_dir) / store_filename(n, ell, k);
            Store st = store_load(read_file(p));
            auto issues = store_verify(st);
            for (const auto& s : issues) std::cout << "FAIL " << s << "\n";
            if (issues.empty()) std::cout << "PASS store certificates match\n";
            return issues.empty() ? 0 : 1;
        }
        std::vector<int> degs;
        for (long long d : parse_list(degrees)) degs.push_back((int)d);
        if (app.got_subcommand(hecke)) {
            auto ps = parse_list(primes);
            auto rep = level_report(store_dir, n, ps, level, nebentype, degs, jobs);
            print_report(std::cout, level, nebentype, ps.empty() ? 0 : ps[0], rep);
            return 0;
        }
        if (app.got_subcommand(table)) {
            for (long long N : parse_list(levels)) {
                int phi = 0;
                for (int u = 1; u < N; ++u)
                    if (std::gcd((long long)u, N) == 1) ++phi;
                if (N == 1) phi = 1;
                // characters up to conjugation: exponents j and phi - j agree
                for (int j = 0; j <= phi / 2; ++j) {
                    std::string name = j == 0 ? "triv" : "chi^" + std::to_string(j);
                    std::vector<long long> ps;
                    for (long long p : parse_list(primes))
                        if (N == 1 || std::gcd(p, N) == 1) ps.push_back(p);
                    auto rep = level_report(store_dir, n, ps, (int)N, name, degs, jobs);
                    print_report(std::cout, (int)N, name, ps.empty() ? 0 : ps[0], rep);
                }
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
