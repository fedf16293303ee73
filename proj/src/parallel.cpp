#include "cbeta/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cbeta {

unsigned default_workers() noexcept
{
    if (char const* env = std::getenv("CBETA_OPUC_THREADS"))
    {
        try
        {
            long const value = std::stol(env);
            if (value > 0)
                return static_cast<unsigned>(value);
        }
        catch (...)
        {
        }
    }
    unsigned const hw = std::thread::hardware_concurrency();
    return hw ? hw : 1u;
}

}  // namespace cbeta
