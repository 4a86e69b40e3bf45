from rumorsim.rumorsim import Rumorsim
