#pragma once

#include "sosq/applications.hpp"
#include "sosq/certificate_json.hpp"
#include "sosq/certify.hpp"
#include "sosq/formulate.hpp"
#include "sosq/forms.hpp"
#include "sosq/groebner.hpp"
#include "sosq/monomial.hpp"
#include "sosq/newton.hpp"
#include "sosq/parse.hpp"
#include "sosq/polynomial.hpp"
#include "sosq/qmatrix.hpp"
#include "sosq/rational.hpp"
#include "sosq/ring.hpp"
#include "sosq/sdp.hpp"
#include "sosq/sdpa_io.hpp"
#include "sosq/sos_poly.hpp"
