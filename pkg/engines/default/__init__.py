from .fedchs import FedChsEngine
from .fedavg import FedAvgEngine
from .hfl import HflEngine
from .sfl_randomwalk import RandomWalkEngine
