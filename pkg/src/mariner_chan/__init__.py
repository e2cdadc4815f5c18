"""Maritime wireless channel modeling toolkit.

Library modules:

- ``geometry``: link geometry and propagation-regime threshold distances
- ``pathloss``: free-space, two-ray, MTR, CI, dual-slope CI, dual-slope CI-MTR
- ``plfit``: least-squares fitting of path loss exponents and shadow sigma
- ``seastate``: Pierson-Moskowitz spectrum and harmonic sea-surface realization
- ``swift``: sea-wave-induced fixed-point fading simulation with vessel motion
- ``smallscale``: fading distribution families, MLE fitting, goodness of fit
- ``sparsity``: Gini index, Rician K from PDPs, resolution-change checks
- ``temporal``: RMS delay spread and exponential PDP fitting
- ``sounder``: Zadoff-Chu sounding simulation and CIR extraction
- ``cli``: batch command-line front end over CSV/JSON data
"""

__version__ = "0.1.0"
