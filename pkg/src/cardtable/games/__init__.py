"""Game engines: blackjack, leduc, limit hold'em, uno, dou dizhu."""
