#pragma once

#include "rwspell/confusion.hpp"
#include "rwspell/corpus_io.hpp"
#include "rwspell/corrector.hpp"
#include "rwspell/corruptor.hpp"
#include "rwspell/error.hpp"
#include "rwspell/evalkit.hpp"
#include "rwspell/lm.hpp"
#include "rwspell/textprep.hpp"
#include "rwspell/unicode.hpp"
#include "rwspell/vocab.hpp"
