#pragma once

#include "gpt_spectra/axioms.hpp"
#include "gpt_spectra/channel.hpp"
#include "gpt_spectra/eigensolve.hpp"
#include "gpt_spectra/error.hpp"
#include "gpt_spectra/majorize.hpp"
#include "gpt_spectra/pure.hpp"
#include "gpt_spectra/purify.hpp"
#include "gpt_spectra/purity.hpp"
#include "gpt_spectra/random.hpp"
#include "gpt_spectra/spectral.hpp"
#include "gpt_spectra/theory.hpp"
#include "gpt_spectra/tolerance.hpp"
