from .quadratic import QuadraticModel
from .logistic import LogisticModel
from .mlp import MlpModel
