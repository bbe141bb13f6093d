class NumericsConfig:
    """
    Numerical knobs shared by all modules. Functions read the singleton at call time,
    so tests may tweak a value and restore it with set_defaults().
    """
    # quadrature
    quad_epsabs: float
    quad_epsrel: float
    quad_limit: int
    tail_cutoff: float

    # conjugation
    scan_points: int
    scan_log_min: float
    scan_log_max: float
    golden_iterations: int
    growth_factor: float
    endpoint_offset: float

    # generating-function spaces
    gls_grid_points: int
    p_cap: float
    gls_divergence_ratio: float

    # exponential spaces
    bphi_lambda_min: float
    bphi_lambda_max: float
    bphi_lambda_points: int
    bphi_lambda0_shrink: float
    bphi_rel_tol: float
    bphi_tau_cap: float
    phi_conv_points: int
    phi_conv_lambda_cap: float

    # simulation
    chunk_size: int
    chunk_elements: int
    min_verification_reps: int
    min_exponent_points: int
    exponent_window: tuple

    def __init__(self):
        self.set_defaults()

    def set_defaults(self):
        self.quad_epsabs = 1e-10
        self.quad_epsrel = 1e-8
        self.quad_limit = 200
        self.tail_cutoff = 1e-16

        self.scan_points = 512
        self.scan_log_min = -12.0
        self.scan_log_max = 8.0
        self.golden_iterations = 80
        self.growth_factor = 10.0
        self.endpoint_offset = 1e-12

        self.gls_grid_points = 400
        self.p_cap = 512.0
        self.gls_divergence_ratio = 0.75

        self.bphi_lambda_min = 1e-4
        self.bphi_lambda_max = 50.0
        self.bphi_lambda_points = 400
        self.bphi_lambda0_shrink = 1e-6
        self.bphi_rel_tol = 1e-9
        self.bphi_tau_cap = 1e6
        self.phi_conv_points = 4001
        self.phi_conv_lambda_cap = 20.0

        self.chunk_size = 2 ** 14
        self.chunk_elements = 2 ** 22
        self.min_verification_reps = 1000
        self.min_exponent_points = 5
        self.exponent_window = (1e-5, 1e-1)


numerics = NumericsConfig()
