#pragma once

#include "mcw/types.hpp"

namespace mcw {

// Unitary FFTs of arbitrary length. Backed by a thread-local plan cache, so
// concurrent calls from different threads never share mutable state.
CVector unitary_fft(const CVector& x);
CVector unitary_ifft(const CVector& x);

}  // namespace mcw
