from .decode import (GeneratedTitle, GenerationFailure, GenerationRequest, batch_generate,
                     greedy_decode)
