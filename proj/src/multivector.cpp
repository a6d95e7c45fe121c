#include "conflab/exta/multivector.hpp"

// header-only; this TU exists so the target has a home for the module
