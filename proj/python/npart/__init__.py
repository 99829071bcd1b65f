"""Number partitioning solvers with a divide-and-merge pipeline."""

from ._core import (
    CapabilityError,
    Instance,
    IoError,
    NetworkError,
    Partition,
    ProtocolError,
    QuboMatrix,
    SolveError,
    balanced_random_vector,
    build_npp_qubo,
    complement,
    count_perfect_assignments,
    energy,
    expected_perfect_count,
    generate_instance,
    is_perfect,
    m_for_target,
    max_m_bound,
    pathological_instance,
    qubo_energy,
    read_instance,
    run_bench,
    run_pipeline,
    solve_exact,
    solve_greedy,
    solve_ldm,
    solve_remote,
    solve_sa,
    verify_hamiltonian_identity,
    write_instance,
)

__all__ = [
    "CapabilityError",
    "Instance",
    "IoError",
    "NetworkError",
    "Partition",
    "ProtocolError",
    "QuboMatrix",
    "SolveError",
    "balanced_random_vector",
    "build_npp_qubo",
    "complement",
    "count_perfect_assignments",
    "energy",
    "expected_perfect_count",
    "generate_instance",
    "is_perfect",
    "m_for_target",
    "max_m_bound",
    "pathological_instance",
    "qubo_energy",
    "read_instance",
    "run_bench",
    "run_pipeline",
    "solve_exact",
    "solve_greedy",
    "solve_ldm",
    "solve_remote",
    "solve_sa",
    "verify_hamiltonian_identity",
    "write_instance",
]
