#pragma once

#include "contours.hpp"
#include "errors.hpp"
#include "functions.hpp"
#include "invz.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "summation.hpp"
#include "wienerhopf.hpp"
