#include <exception>
#include <iostream>

#include <gasketlab/verify.hpp>

int main() {
    const auto criteria = gasket::acceptance_criteria();
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        try {
            const auto r = criteria[k]();
            std::cout << gasket::format_result(r) << std::flush;
            failed += !r.pass();
        } catch (const std::exception& e) {
            std::cout << "FAIL  criterion " << k + 1 << ": threw " << e.what() << '\n' << std::flush;
            ++failed;
        }
    }
    std::cout << (criteria.size() - std::size_t(failed)) << "/" << criteria.size() << " criteria passed\n";
    return failed ? 1 : 0;
}
