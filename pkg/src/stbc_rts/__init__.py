"""Reactive tabu search decoding of full-rate non-orthogonal STBCs."""

from .channel import (ChannelInstance, add_noise, mmse_channel_estimate,
                      sample_channel, snr_to_sigma2, substream)
from .detectors import (RtsConfig, RtsState, SearchSpaceError,
                        fixed_iteration_config, init_rts_state, las_decode,
                        mf_detect, ml_brute_force, ml_cost, mmse_detect,
                        rts_apply_move, rts_cost_delta, rts_decode,
                        rts_decrement_tabu, rts_reactive_update,
                        rts_select_move, rts_should_stop)
from .signal_set import (SignalSet, make_pam, quantize, quantize_array,
                         symbol_indices)
from .sim import (BerRecord, SimConfig, run_ber_sweep, run_frame,
                  siso_awgn_reference, write_results)
from .stbc import (RealSystem, StbcCode, bits_to_symbols, build_code,
                   effective_channel, encode, extract_bits, fdill_code,
                   ill_code, realify)

__all__ = [
    "BerRecord", "ChannelInstance", "RealSystem", "RtsConfig", "RtsState",
    "SearchSpaceError", "SignalSet", "SimConfig", "StbcCode", "add_noise",
    "bits_to_symbols", "build_code", "effective_channel", "encode",
    "extract_bits", "fdill_code", "fixed_iteration_config", "ill_code",
    "init_rts_state", "las_decode", "make_pam", "mf_detect",
    "ml_brute_force", "ml_cost", "mmse_channel_estimate", "mmse_detect",
    "quantize", "quantize_array", "realify", "rts_apply_move",
    "rts_cost_delta", "rts_decode", "rts_decrement_tabu",
    "rts_reactive_update", "rts_select_move", "rts_should_stop",
    "run_ber_sweep", "run_frame", "sample_channel", "siso_awgn_reference",
    "snr_to_sigma2", "substream", "symbol_indices", "write_results",
]
