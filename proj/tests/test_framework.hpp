#pragma once
// Minimal single-binary test runner: TEST(name) registers a case, CHECK*
// record failures and continue, REQUIRE aborts the current case. run_all
// returns the number of failed cases (process exit code).

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

namespace testfw {

struct Case {
    const char* name;
    void (*fn)();
};

inline std::vector<Case>& registry() {
    static std::vector<Case> r;
    return r;
}

inline int& case_failures() {
    static int f = 0;
    return f;
}

struct Register {
    Register(const char* name, void (*fn)()) { registry().push_back({name, fn}); }
};

struct RequireFailed : std::exception {};

inline void report(const char* file, int line, const std::string& what) {
    std::printf("  FAIL %s:%d  %s\n", file, line, what.c_str());
    ++case_failures();
}

inline int run_all() {
    int failed_cases = 0;
    for (const auto& c : registry()) {
        case_failures() = 0;
        std::printf("[ RUN  ] %s\n", c.name);
        try {
            c.fn();
        } catch (const RequireFailed&) {
        } catch (const std::exception& e) {
            report("(exception)", 0, std::string("unhandled: ") + e.what());
        }
        if (case_failures() > 0) {
            std::printf("[ FAIL ] %s\n", c.name);
            ++failed_cases;
        } else {
            std::printf("[  OK  ] %s\n", c.name);
        }
    }
    std::printf("%zu cases, %d failed\n", registry().size(), failed_cases);
    return failed_cases;
}

}  // namespace testfw

#define TEST(name)                                            \
    static void testfn_##name();                              \
    static ::testfw::Register testreg_##name(#name, &testfn_##name); \
    static void testfn_##name()

#define CHECK(cond)                                                         \
    do {                                                                    \
        if (!(cond)) ::testfw::report(__FILE__, __LINE__, "CHECK " #cond);  \
    } while (0)

#define CHECK_MSG(cond, msg)                                                      \
    do {                                                                          \
        if (!(cond))                                                              \
            ::testfw::report(__FILE__, __LINE__, std::string("CHECK " #cond " : ") + (msg)); \
    } while (0)

#define CHECK_CLOSE(a, b, tol)                                                               \
    do {                                                                                     \
        double va = static_cast<double>(a), vb = static_cast<double>(b);                     \
        if (!(std::abs(va - vb) <= (tol)))                                                   \
            ::testfw::report(__FILE__, __LINE__,                                             \
                             std::string(#a " vs " #b ": ") + std::to_string(va) + " vs " +  \
                                 std::to_string(vb) + " (tol " + std::to_string(tol) + ")"); \
    } while (0)

#define REQUIRE(cond)                                                \
    do {                                                             \
        if (!(cond)) {                                               \
            ::testfw::report(__FILE__, __LINE__, "REQUIRE " #cond);  \
            throw ::testfw::RequireFailed{};                         \
        }                                                            \
    } while (0)

#define TEST_MAIN() \
    int main() { return ::testfw::run_all(); }
