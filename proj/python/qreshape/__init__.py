"""MS-gate noise channels and repetition-code noise reshaping."""

from ._qreshape import (  # noqa: F401
    __version__,
    analytic_kraus,
    brute_force_output,
    circuit_agnostic_output,
    circuit_unitary,
    compile_circuit,
    encoded_state_first_order,
    exact_error_channel,
    heating_kraus,
    model_curves,
    r_params,
    run_sweep_csv,
    solve_coefficients,
)
