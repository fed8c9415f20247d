#pragma once

// Umbrella header for the whole library.

#include "tempostego/audio.hpp"
#include "tempostego/codec.hpp"
#include "tempostego/detect.hpp"
#include "tempostego/embed.hpp"
#include "tempostego/errors.hpp"
#include "tempostego/extract.hpp"
#include "tempostego/fft.hpp"
#include "tempostego/params.hpp"
#include "tempostego/track.hpp"
#include "tempostego/tsm.hpp"
