#pragma once

#include "deptx/datagen.hpp"
#include "deptx/dataset_io.hpp"
#include "deptx/error.hpp"
#include "deptx/ibm1.hpp"
#include "deptx/logical_form.hpp"
#include "deptx/operation.hpp"
#include "deptx/random.hpp"
#include "deptx/stats.hpp"
#include "deptx/transform.hpp"
#include "deptx/treebank.hpp"
#include "deptx/unfold.hpp"
