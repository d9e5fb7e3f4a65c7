#include "spdc/grid.hpp"

#include <cmath>
#include <mutex>

#include <fftw3.h>

namespace spdc {

double Field2D::norm_sq() const {
    double sum = 0.0, comp = 0.0;
    for (const auto& z : v) {
        const double y = std::norm(z) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

Field2D sample_mode(const ModeSpec& mode, const GridSpec& grid) {
    Field2D field(grid);
    for (int iy = 0; iy < grid.n; ++iy) {
        const double y = grid.coord(iy);
        for (int ix = 0; ix < grid.n; ++ix) {
            const double x = grid.coord(ix);
            field.at(ix, iy) =
                lg_amplitude(mode, {std::hypot(x, y), std::atan2(y, x)});
        }
    }
    return field;
}

void fft2(Field2D& field, int sign) {
    // FFTW planning is not thread-safe; execution is.
    static std::mutex plan_mutex;
    auto* data = reinterpret_cast<fftw_complex*>(field.v.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        plan = fftw_plan_dft_2d(field.grid.n, field.grid.n, data, data,
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(plan);
    }
}

} // namespace spdc
