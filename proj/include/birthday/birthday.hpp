#pragma once

#include "birthday/analysis.hpp"
#include "birthday/counting.hpp"
#include "birthday/exact.hpp"
#include "birthday/oracle.hpp"
#include "birthday/partition.hpp"
#include "birthday/record.hpp"
#include "birthday/verify.hpp"
