// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "fkpp/acceptance.hpp"

int main(int argc, char** argv) {
    fkpp::app::AcceptanceOptions opts;
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    const auto results = fkpp::app::run_acceptance(opts, ids);
    int failed = 0;
    for (const auto& r : results) {
        std::printf("%s\n", fkpp::app::format_line(r).c_str());
        failed += r.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
    return failed == 0 ? 0 : 1;
}
