"""Uplink multiuser OTFS time/frequency synchronization bindings."""

import os
import sys


def _load_core():
    try:
        from . import _core  # installed package layout
        return _core
    except ImportError:
        pass
    # build-tree layout: extension directory advertised by the test harness
    ext_dir = os.environ.get("OTFS_SYNC_EXT_DIR")
    if ext_dir and ext_dir not in sys.path:
        sys.path.insert(0, ext_dir)
    import _core
    return _core


_core = _load_core()

zadoff_chu = _core.zadoff_chu
build_pcp = _core.build_pcp
unitary_dft = _core.unitary_dft
filter_taps = _core.filter_taps
timing_metric = _core.timing_metric
threshold_range = _core.threshold_range
cpf_basis = _core.cpf_basis
max_users = _core.max_users
spectral_efficiency = _core.spectral_efficiency
complexity_cms = _core.complexity_cms
doppler_energy_concentration = _core.doppler_energy_concentration
doppler_energy_inverse = _core.doppler_energy_inverse
run_experiment_csv = _core.run_experiment_csv
run_trial = _core.run_trial
validate = _core.validate

__all__ = [
    "zadoff_chu",
    "build_pcp",
    "unitary_dft",
    "filter_taps",
    "timing_metric",
    "threshold_range",
    "cpf_basis",
    "max_users",
    "spectral_efficiency",
    "complexity_cms",
    "doppler_energy_concentration",
    "doppler_energy_inverse",
    "run_experiment_csv",
    "run_trial",
    "validate",
]
