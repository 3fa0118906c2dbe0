"""From a time-domain trace to boundary data, and the contrast readout."""

# %%
import numpy as np

from freqcip import FrequencyGrid, MediumProfile, SpatialGrid, extract_boundary_data
from freqcip.ingest import PreprocessConfig, contrast, preprocess, synthesize_time_series

data = extract_boundary_data(MediumProfile.inclusion(SpatialGrid(), 4.0), FrequencyGrid())

# %% synthesise a trace sampled every 0.05 ns over +-100 ns
ts = synthesize_time_series(data, 0.05e-9, (-100e-9, 100e-9))
print("samples:", ts.samples.size, " peak amplitude:", np.abs(ts.samples).max())

# %% back to the frequency band, calibration 1 because the trace is already in model units
cfg = PreprocessConfig(calibration=1.0, band_selection=(0.5, 1.5))
back = preprocess(ts, cfg)
print("relative L2 error in g0:", np.linalg.norm(back.g0 - data.g0) / np.linalg.norm(data.g0))

# %% contrast against a background range
print(contrast(np.array([1.0, 6.5, 1.2])).to_dict())
print(contrast(np.array([1.0, 0.3, 0.9]), sign=-1, c_bckgr=(3, 5)).to_dict())
