#include <pybind11/pybind11.h>
PYBIND11_MODULE(_invsq, m) { m.doc() = "invsq bindings"; }
