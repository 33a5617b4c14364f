#ifndef CGRAS_CGRAS_HPP
#define CGRAS_CGRAS_HPP

#include "cgras/arith.hpp"
#include "cgras/f2.hpp"
#include "cgras/finite_group.hpp"
#include "cgras/formulas.hpp"
#include "cgras/hilbert.hpp"
#include "cgras/modulus.hpp"
#include "cgras/quadfield.hpp"
#include "cgras/quadforms.hpp"
#include "cgras/rayoracle.hpp"
#include "cgras/verify.hpp"

#endif
