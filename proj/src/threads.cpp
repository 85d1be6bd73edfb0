#include "mesoheat/threads.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace mesoheat {

int max_threads() {
    static const int cached = [] {
        int n = 0;
        if (const char* env = std::getenv("MESOHEAT_THREADS")) {
            try {
                n = std::stoi(env);
            } catch (const std::exception&) {
                n = 0;
            }
        }
        if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
        return n > 0 ? n : 1;
    }();
    return cached;
}

}  // namespace mesoheat
