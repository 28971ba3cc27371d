#pragma once

#include "treeseq/decoding.hpp"
#include "treeseq/encoding.hpp"
#include "treeseq/error.hpp"
#include "treeseq/eval.hpp"
#include "treeseq/features.hpp"
#include "treeseq/io.hpp"
#include "treeseq/perceptron.hpp"
#include "treeseq/tagger.hpp"
#include "treeseq/toy_corpus.hpp"
#include "treeseq/tree.hpp"
