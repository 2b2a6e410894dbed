"""NFM and NFAM line spectra at the largest drive, side by side.

With a constant amplitude the first sidebands are nearly balanced. Letting
the envelope follow its own law tilts them strongly towards the upper side.
"""

from nfam import (
    NANOCONTACT_AMPLITUDE_LAW,
    NANOCONTACT_FREQUENCY_LAW,
    Tone,
    modulation_indexes,
    nfam_spectrum,
    nfm_spectrum,
    sideband_ratio,
)

idx = modulation_indexes(NANOCONTACT_FREQUENCY_LAW, Tone(1.5, 0.5), NANOCONTACT_AMPLITUDE_LAW)
nfm = nfm_spectrum(NANOCONTACT_AMPLITUDE_LAW.Ac, idx)
nfam = nfam_spectrum(idx)

print(f"shifted carrier {idx.fcI:.6f} GHz")
print(f"{'n':>3} {'f (GHz)':>10} {'NFM':>10} {'NFAM':>10}")
for n in range(-4, 5):
    print(f"{n:3d} {nfm.frequency(n):10.4f} {nfm.amplitude(n):10.6f} {nfam.amplitude(n):10.6f}")
for l in (1, 2):
    print(f"Psi_{l}: NFM {sideband_ratio(nfm, l):.4f}  NFAM {sideband_ratio(nfam, l):.4f}")
