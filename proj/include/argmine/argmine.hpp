#pragma once

#include "argmine/corpus.hpp"
#include "argmine/dataset.hpp"
#include "argmine/error.hpp"
#include "argmine/evaluation.hpp"
#include "argmine/features.hpp"
#include "argmine/pipeline.hpp"
#include "argmine/svm.hpp"
#include "argmine/text.hpp"
