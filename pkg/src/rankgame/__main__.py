from rankgame.cli import main

main()
