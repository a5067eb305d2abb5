#include <pybind11/pybind11.h>
PYBIND11_MODULE(_ovalkit, m) { m.doc() = "placeholder"; }
