// Runs every suite with the default configuration and prints one line per
// acceptance criterion. Exit status is nonzero when any criterion fails.
#include "qgroup/suites.hpp"

#include <cstdio>
#include <fstream>
#include <functional>

using namespace qgroup;

namespace {

struct Criterion {
    int id;
    const char* title;
    std::function<bool(const std::string&)> owns;
};

bool starts(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;  // grid {0,1,2}, order 8, depth 4, seed 1
    const Report r = run(cfg);
    if (argc > 1) std::ofstream(argv[1]) << r.json().dump(2) << "\n";

    const std::vector<Criterion> criteria = {
        {1, "quiver audit", [](const std::string& n) { return starts(n, "quiver-audit/"); }},
        {2, "classical structure", [](const std::string& n) { return starts(n, "jacobi/"); }},
        {3, "rewriting", [](const std::string& n) { return starts(n, "confluence/"); }},
        {4, "hopf axioms", [](const std::string& n) { return starts(n, "hopf-axioms/"); }},
        {5, "pairing", [](const std::string& n) { return starts(n, "pairing/") && n.find("doubled-cartan") == std::string::npos; }},
        {6, "qdp membership controls", [](const std::string& n) { return starts(n, "qdp-membership/"); }},
        {7, "qdp semiclassical",
         [](const std::string& n) {
             return starts(n, "commutativity/") || starts(n, "semiclassical-match/bracket") ||
                    starts(n, "semiclassical-match/cobracket");
         }},
        {8, "dual group shape", [](const std::string& n) { return starts(n, "dual-shape/"); }},
        {9, "specialization", [](const std::string& n) { return n == "semiclassical-match/specialization"; }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        int pass = 0, total = 0;
        const CheckRecord* first_fail = nullptr;
        for (const auto& rec : r.checks) {
            if (!c.owns(rec.name)) continue;
            ++total;
            if (rec.status == "pass") ++pass;
            else if (!first_fail) first_fail = &rec;
        }
        const bool ok = total > 0 && pass == total;
        if (!ok) ++failed;
        std::printf("criterion %d %-24s %s  %d/%d checks", c.id, c.title, ok ? "PASS" : "FAIL", pass, total);
        if (first_fail) std::printf("  first failure: %s: %.160s", first_fail->name.c_str(), first_fail->witness.c_str());
        std::printf("\n");
    }
    for (const auto& rec : r.checks)
        if (rec.name.find("doubled-cartan") != std::string::npos)
            std::printf("diagnostic %s %s\n", rec.name.c_str(), rec.status.c_str());
    std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
