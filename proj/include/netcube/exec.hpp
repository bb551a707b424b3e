#pragma once

namespace netcube {

// Selects between the OpenMP kernel and the plain serial loop it was derived
// from. Both paths produce bit-identical results; the serial one is kept as
// the reference the tests compare against.
enum class Exec { serial, parallel };

}  // namespace netcube
