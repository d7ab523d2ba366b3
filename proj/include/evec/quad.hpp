#ifndef EVEC_QUAD_HPP
#define EVEC_QUAD_HPP

#include <cstdint>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace evec {

/// IEEE binary128-equivalent software float (113-bit significand), without
/// expression templates so it behaves like a plain arithmetic type.
using quad = boost::multiprecision::number<
    boost::multiprecision::backends::cpp_bin_float<113, boost::multiprecision::backends::digit_base_2, void,
                                                   std::int16_t, -16382, 16383>,
    boost::multiprecision::et_off>;

} // namespace evec

#endif // EVEC_QUAD_HPP
