#pragma once

#include "lmrecog/bitset.hpp"
#include "lmrecog/bundle.hpp"
#include "lmrecog/errors.hpp"
#include "lmrecog/graphs.hpp"
#include "lmrecog/grounding.hpp"
#include "lmrecog/landmarks.hpp"
#include "lmrecog/log.hpp"
#include "lmrecog/model.hpp"
#include "lmrecog/oracle.hpp"
#include "lmrecog/pddl.hpp"
#include "lmrecog/recognize.hpp"
#include "lmrecog/suite.hpp"
